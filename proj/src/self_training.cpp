#include "bartle/self_training.hpp"

#include <algorithm>
#include <stdexcept>

namespace bartle {

SelfTrainResult self_train(const Dataset& labeled, const Dataset& unlabeled,
                           const SelfTrainParams& params, std::size_t class_count) {
  if (labeled.rows.empty()) throw std::invalid_argument("self_train: empty labeled set");
  if (labeled.labels.size() != labeled.rows.size())
    throw std::invalid_argument("self_train: labeled set missing labels");
  if (params.max_iterations < 1) throw std::invalid_argument("self_train: max_iterations < 1");
  if (!(params.confidence_threshold > 0 && params.confidence_threshold <= 1))
    throw std::invalid_argument("self_train: confidence_threshold outside (0, 1]");

  if (class_count == 0)
    for (const int label : labeled.labels)
      class_count = std::max(class_count, static_cast<std::size_t>(label) + 1);

  SelfTrainResult result;
  result.labels.assign(unlabeled.rows.size(), -1);
  result.low_confidence.assign(unlabeled.rows.size(), false);

  {
    std::vector<bool> seen(class_count, false);
    for (const int label : labeled.labels) seen[static_cast<std::size_t>(label)] = true;
    result.degenerate = std::count(seen.begin(), seen.end(), true) <= 1;
  }

  Dataset pool = labeled;  // grows as predictions are adopted
  std::vector<std::size_t> pending(unlabeled.rows.size());
  for (std::size_t i = 0; i < pending.size(); ++i) pending[i] = i;

  TreePtr model;
  bool model_is_current = false;
  while (true) {
    ++result.iterations;
    model = train_tree(pool, params.tree_params, class_count);
    model_is_current = true;
    if (pending.empty()) break;

    std::vector<std::size_t> still_pending;
    std::size_t adopted = 0;
    for (const std::size_t i : pending) {
      const Prediction p = predict(*model, unlabeled.rows[i]);
      if (p.confidence >= params.confidence_threshold) {
        result.labels[i] = p.label;
        pool.rows.push_back(unlabeled.rows[i]);
        pool.labels.push_back(p.label);
        pool.ids.push_back(unlabeled.ids.empty() ? std::string() : unlabeled.ids[i]);
        ++adopted;
        model_is_current = false;
      } else {
        still_pending.push_back(i);
      }
    }
    pending = std::move(still_pending);
    result.progress.push_back({result.iterations, adopted, pending.size()});
    if (adopted == 0 || pending.empty() || result.iterations >= params.max_iterations) break;
  }

  // The reported model is always trained on the final labeled set.
  if (!model_is_current) model = train_tree(pool, params.tree_params, class_count);

  // Residuals get a best-effort prediction from the final model, flagged.
  result.residual_unlabeled = pending.size();
  for (const std::size_t i : pending) {
    result.labels[i] = predict(*model, unlabeled.rows[i]).label;
    result.low_confidence[i] = true;
  }

  result.model = std::move(model);
  return result;
}

}  // namespace bartle
