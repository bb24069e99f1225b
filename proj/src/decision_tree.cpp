#include "bartle/decision_tree.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace bartle {

double entropy(std::span<const std::size_t> class_counts) {
  std::size_t total = 0;
  for (const std::size_t c : class_counts) total += c;
  if (total == 0) throw std::invalid_argument("entropy: all counts zero");
  double h = 0;
  for (const std::size_t c : class_counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return h < 0 ? 0 : h;
}

namespace {

std::size_t sum(std::span<const std::size_t> counts) {
  std::size_t s = 0;
  for (const std::size_t c : counts) s += c;
  return s;
}

double gain_from_counts(std::span<const std::size_t> parent,
                        const std::vector<std::vector<std::size_t>>& children) {
  const auto n = static_cast<double>(sum(parent));
  double weighted = 0;
  for (const auto& child : children) {
    const std::size_t child_n = sum(child);
    if (child_n == 0) continue;
    weighted += static_cast<double>(child_n) / n * entropy(child);
  }
  const double g = entropy(parent) - weighted;
  return g < 0 ? 0 : g;
}

}  // namespace

double information_gain(std::span<const std::size_t> parent,
                        const std::vector<std::vector<std::size_t>>& children) {
  std::vector<std::size_t> recombined(parent.size(), 0);
  for (const auto& child : children) {
    if (child.size() != parent.size())
      throw std::invalid_argument("information_gain: child class-count width mismatch");
    for (std::size_t i = 0; i < child.size(); ++i) recombined[i] += child[i];
  }
  for (std::size_t i = 0; i < parent.size(); ++i)
    if (recombined[i] != parent[i])
      throw std::invalid_argument("information_gain: children do not partition parent");
  return gain_from_counts(parent, children);
}

namespace {

struct Candidate {
  std::size_t feature = 0;
  bool numeric = true;
  double threshold = 0;
  std::vector<int> branch_codes;
  double gain = -1;
};

// Candidate ordering for ties: smaller feature name, then smaller threshold.
bool better_than(const Candidate& a, const Candidate& b, const Dataset& data) {
  if (a.gain != b.gain) return a.gain > b.gain;
  const auto& name_a = data.schema.at(a.feature).name;
  const auto& name_b = data.schema.at(b.feature).name;
  if (name_a != name_b) return name_a < name_b;
  return a.threshold < b.threshold;
}

std::vector<std::size_t> class_counts_of(const Dataset& data, std::span<const std::size_t> indices,
                                         std::size_t class_count) {
  std::vector<std::size_t> counts(class_count, 0);
  for (const std::size_t i : indices) ++counts[static_cast<std::size_t>(data.labels[i])];
  return counts;
}

std::optional<Candidate> find_best_split(const Dataset& data, std::span<const std::size_t> indices,
                                         const TrainParams& params, std::size_t class_count,
                                         const std::vector<bool>& nominal_used) {
  const auto parent_counts = class_counts_of(data, indices, class_count);
  const auto min_leaf = static_cast<std::size_t>(params.min_leaf);
  Candidate best;
  bool have_best = false;

  for (std::size_t f = 0; f < data.schema.size(); ++f) {
    const FeatureDef& def = data.schema.at(f);
    if (def.kind == FeatureKind::Nominal) {
      if (nominal_used[f]) continue;  // a nominal attribute is tested at most once per path
      // One branch per observed code.
      std::vector<std::pair<int, std::vector<std::size_t>>> branches;
      for (const std::size_t i : indices) {
        const int code = static_cast<int>(data.rows[i][f]);
        auto it = std::find_if(branches.begin(), branches.end(),
                               [code](const auto& b) { return b.first == code; });
        if (it == branches.end()) {
          branches.emplace_back(code, std::vector<std::size_t>(class_count, 0));
          it = std::prev(branches.end());
        }
        ++it->second[static_cast<std::size_t>(data.labels[i])];
      }
      if (branches.size() < 2) continue;
      std::sort(branches.begin(), branches.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      bool feasible = true;
      std::vector<std::vector<std::size_t>> children;
      children.reserve(branches.size());
      for (const auto& [code, counts] : branches) {
        if (sum(counts) < min_leaf) { feasible = false; break; }
        children.push_back(counts);
      }
      if (!feasible) continue;
      Candidate c;
      c.feature = f;
      c.numeric = false;
      c.gain = gain_from_counts(parent_counts, children);
      for (const auto& [code, counts] : branches) c.branch_codes.push_back(code);
      if (!have_best || better_than(c, best, data)) { best = std::move(c); have_best = true; }
    } else {
      // Binary split at midpoints between consecutive distinct values.
      std::vector<std::pair<double, int>> values;
      values.reserve(indices.size());
      for (const std::size_t i : indices) values.emplace_back(data.rows[i][f], data.labels[i]);
      std::sort(values.begin(), values.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      std::vector<std::size_t> left(class_count, 0);
      std::vector<std::size_t> right = parent_counts;
      std::size_t left_n = 0;
      const std::size_t n = values.size();
      std::size_t i = 0;
      while (i < n) {
        // consume the run of equal values
        const double v = values[i].first;
        while (i < n && values[i].first == v) {
          ++left[static_cast<std::size_t>(values[i].second)];
          --right[static_cast<std::size_t>(values[i].second)];
          ++left_n;
          ++i;
        }
        if (i == n) break;
        if (left_n < min_leaf || n - left_n < min_leaf) continue;
        Candidate c;
        c.feature = f;
        c.numeric = true;
        c.threshold = (v + values[i].first) / 2.0;
        c.gain = gain_from_counts(parent_counts, {left, right});
        if (!have_best || better_than(c, best, data)) { best = std::move(c); have_best = true; }
      }
    }
  }

  if (!have_best || best.gain < params.min_gain) return std::nullopt;
  return best;
}

int majority_class(std::span<const std::size_t> counts) {
  std::size_t best = 0;
  int arg = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] > best) {  // strict: the smallest class id wins ties
      best = counts[i];
      arg = static_cast<int>(i);
    }
  }
  return arg;
}

TreePtr grow_node(const Dataset& data, std::vector<std::size_t>& indices, int depth,
                  const TrainParams& params, std::size_t class_count,
                  std::vector<bool>& nominal_used) {
  auto node = std::make_unique<TreeNode>();
  node->class_counts = class_counts_of(data, indices, class_count);
  node->majority = majority_class(node->class_counts);

  const std::size_t nonzero_classes =
      static_cast<std::size_t>(std::count_if(node->class_counts.begin(), node->class_counts.end(),
                                             [](std::size_t c) { return c > 0; }));
  if (nonzero_classes <= 1 || depth >= params.max_depth ||
      indices.size() < 2 * static_cast<std::size_t>(params.min_leaf))
    return node;

  const auto split = find_best_split(data, indices, params, class_count, nominal_used);
  if (!split) return node;

  node->feature = static_cast<int>(split->feature);
  node->numeric_split = split->numeric;
  node->threshold = split->threshold;
  node->branch_codes = split->branch_codes;

  if (split->numeric) {
    std::vector<std::size_t> left, right;
    for (const std::size_t i : indices)
      (data.rows[i][split->feature] <= split->threshold ? left : right).push_back(i);
    node->children.push_back(grow_node(data, left, depth + 1, params, class_count, nominal_used));
    node->children.push_back(grow_node(data, right, depth + 1, params, class_count, nominal_used));
  } else {
    nominal_used[split->feature] = true;
    for (const int code : split->branch_codes) {
      std::vector<std::size_t> subset;
      for (const std::size_t i : indices)
        if (static_cast<int>(data.rows[i][split->feature]) == code) subset.push_back(i);
      node->children.push_back(grow_node(data, subset, depth + 1, params, class_count, nominal_used));
    }
    nominal_used[split->feature] = false;
  }
  return node;
}

}  // namespace

std::size_t TreeNode::total() const { return sum(class_counts); }

double TreeNode::purity() const {
  const std::size_t n = total();
  return n == 0 ? 0.0 : static_cast<double>(class_counts[static_cast<std::size_t>(majority)]) /
                            static_cast<double>(n);
}

std::optional<SplitDecision> best_split(const Dataset& data, const TrainParams& params) {
  if (data.rows.size() < 2) throw std::invalid_argument("best_split: need at least 2 examples");
  if (data.schema.size() == 0) throw std::invalid_argument("best_split: no attributes");
  std::size_t class_count = 0;
  for (const int label : data.labels)
    class_count = std::max(class_count, static_cast<std::size_t>(label) + 1);
  std::vector<std::size_t> indices(data.rows.size());
  for (std::size_t i = 0; i < indices.size(); ++i) indices[i] = i;
  std::vector<bool> nominal_used(data.schema.size(), false);
  const auto c = find_best_split(data, indices, params, class_count, nominal_used);
  if (!c) return std::nullopt;
  return SplitDecision{c->feature, c->numeric, c->threshold, c->branch_codes, c->gain};
}

TreePtr grow_tree(const Dataset& data, const TrainParams& params, std::size_t class_count) {
  if (data.rows.empty()) throw std::invalid_argument("grow_tree: empty training set");
  if (data.labels.size() != data.rows.size())
    throw std::invalid_argument("grow_tree: labels missing");
  if (params.min_leaf < 1 || params.max_depth < 1)
    throw std::invalid_argument("grow_tree: bad params");
  if (class_count == 0)
    for (const int label : data.labels)
      class_count = std::max(class_count, static_cast<std::size_t>(label) + 1);
  std::vector<std::size_t> indices(data.rows.size());
  for (std::size_t i = 0; i < indices.size(); ++i) indices[i] = i;
  std::vector<bool> nominal_used(data.schema.size(), false);
  return grow_node(data, indices, 0, params, class_count, nominal_used);
}

namespace {

// Inverse standard normal CDF (Acklam's rational approximation with one
// Halley refinement step).
double inverse_normal_cdf(double p) {
  if (!(p > 0 && p < 1)) throw std::invalid_argument("inverse_normal_cdf: p outside (0,1)");
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (p < plow) {
    const double q = std::sqrt(-2 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  } else if (p <= 1 - plow) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
  } else {
    const double q = std::sqrt(-2 * std::log(1 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  const double err = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
  const double u = err * std::sqrt(2 * M_PI) * std::exp(x * x / 2);
  return x - u / (1 + x * u / 2);
}

}  // namespace

double pessimistic_error(double n, double e, double confidence) {
  if (n <= 0) throw std::invalid_argument("pessimistic_error: n must be positive");
  if (!(confidence > 0 && confidence <= 0.5))
    throw std::invalid_argument("pessimistic_error: confidence outside (0, 0.5]");
  double added;
  if (e < 1e-12) {
    added = n * (1 - std::exp(std::log(confidence) / n));
  } else if (e + 0.5 >= n) {
    added = std::max(0.0, n - e);
  } else {
    const double z = inverse_normal_cdf(1 - confidence);
    const double f = (e + 0.5) / n;
    double upper = (f + z * z / (2 * n) +
                    z * std::sqrt(f / n - f * f / n + z * z / (4 * n * n))) /
                   (1 + z * z / n);
    if (upper > 1) upper = 1;
    added = upper * n - e;
  }
  return e + added;
}

namespace {

double prune_walk(TreeNode& node, double confidence) {
  const auto n = static_cast<double>(node.total());
  const double errors = n - static_cast<double>(node.class_counts[static_cast<std::size_t>(node.majority)]);
  const double as_leaf = pessimistic_error(n, errors, confidence);
  if (node.is_leaf()) return as_leaf;

  double as_subtree = 0;
  for (const auto& child : node.children) as_subtree += prune_walk(*child, confidence);
  if (as_leaf <= as_subtree) {
    node.children.clear();
    node.branch_codes.clear();
    node.feature = -1;
    return as_leaf;
  }
  return as_subtree;
}

}  // namespace

void pessimistic_prune(TreeNode& root, double confidence) { prune_walk(root, confidence); }

TreePtr train_tree(const Dataset& data, const TrainParams& params, std::size_t class_count) {
  auto tree = grow_tree(data, params, class_count);
  pessimistic_prune(*tree, params.confidence);
  return tree;
}

Prediction predict(const TreeNode& root, const FeatureRow& row) {
  const TreeNode* node = &root;
  while (!node->is_leaf()) {
    const auto f = static_cast<std::size_t>(node->feature);
    if (f >= row.size()) throw std::invalid_argument("predict: row narrower than tree schema");
    if (node->numeric_split) {
      node = (row[f] <= node->threshold ? node->children[0] : node->children[1]).get();
    } else {
      const int code = static_cast<int>(row[f]);
      const auto it = std::lower_bound(node->branch_codes.begin(), node->branch_codes.end(), code);
      if (it == node->branch_codes.end() || *it != code)
        return {node->majority, node->purity()};  // unseen nominal value
      node = node->children[static_cast<std::size_t>(it - node->branch_codes.begin())].get();
    }
  }
  return {node->majority, node->purity()};
}

std::size_t node_count(const TreeNode& root) {
  std::size_t count = 1;
  for (const auto& child : root.children) count += node_count(*child);
  return count;
}

std::size_t tree_depth(const TreeNode& root) {
  std::size_t deepest = 0;
  for (const auto& child : root.children) deepest = std::max(deepest, 1 + tree_depth(*child));
  return deepest;
}

namespace {

std::string leaf_text(const TreeNode& node, std::span<const std::string> class_names) {
  std::string out = class_names.empty() ? std::to_string(node.majority)
                                        : class_names[static_cast<std::size_t>(node.majority)];
  out += " {";
  for (std::size_t i = 0; i < node.class_counts.size(); ++i) {
    if (i) out += ", ";
    out += class_names.empty() ? std::to_string(i) : class_names[i];
    out += "=" + std::to_string(node.class_counts[i]);
  }
  out += "}";
  return out;
}

void format_walk(const TreeNode& node, const Dataset& data,
                 std::span<const std::string> class_names, const std::string& indent,
                 std::string& out) {
  char buf[64];
  for (std::size_t b = 0; b < node.children.size(); ++b) {
    const auto& name = data.schema.at(static_cast<std::size_t>(node.feature)).name;
    std::string condition = indent + name;
    if (node.numeric_split) {
      std::snprintf(buf, sizeof(buf), "%.3f", node.threshold);
      condition += (b == 0 ? " <= " : " > ");
      condition += buf;
    } else {
      condition += " = ";
      condition += data.token_of(static_cast<std::size_t>(node.feature), node.branch_codes[b]);
    }
    const TreeNode& child = *node.children[b];
    if (child.is_leaf()) {
      out += condition + ": " + leaf_text(child, class_names) + "\n";
    } else {
      out += condition + "\n";
      format_walk(child, data, class_names, indent + "|   ", out);
    }
  }
}

}  // namespace

std::string format_tree(const TreeNode& root, const Dataset& data,
                        std::span<const std::string> class_names) {
  if (root.is_leaf()) return leaf_text(root, class_names) + "\n";
  std::string out;
  format_walk(root, data, class_names, "", out);
  return out;
}

namespace {

nlohmann::json node_to_json(const TreeNode& node) {
  nlohmann::json j;
  j["counts"] = node.class_counts;
  j["majority"] = node.majority;
  if (!node.is_leaf()) {
    j["feature"] = node.feature;
    j["numeric"] = node.numeric_split;
    if (node.numeric_split) j["threshold"] = node.threshold;
    else j["branches"] = node.branch_codes;
    auto& children = j["children"] = nlohmann::json::array();
    for (const auto& child : node.children) children.push_back(node_to_json(*child));
  }
  return j;
}

TreePtr node_from_json(const nlohmann::json& j) {
  auto node = std::make_unique<TreeNode>();
  node->class_counts = j.at("counts").get<std::vector<std::size_t>>();
  node->majority = j.at("majority").get<int>();
  if (j.contains("children")) {
    node->feature = j.at("feature").get<int>();
    node->numeric_split = j.at("numeric").get<bool>();
    if (node->numeric_split) node->threshold = j.at("threshold").get<double>();
    else node->branch_codes = j.at("branches").get<std::vector<int>>();
    for (const auto& child : j.at("children")) node->children.push_back(node_from_json(child));
  }
  return node;
}

}  // namespace

nlohmann::json tree_to_json(const TreeNode& root, const Dataset& data,
                            std::span<const std::string> class_names) {
  nlohmann::json j;
  auto& schema = j["schema"] = nlohmann::json::array();
  for (const auto& def : data.schema.defs())
    schema.push_back({{"name", def.name},
                      {"kind", def.kind == FeatureKind::Numeric ? "numeric" : "nominal"}});
  j["dictionaries"] = data.dictionaries;
  j["classes"] = std::vector<std::string>(class_names.begin(), class_names.end());
  j["tree"] = node_to_json(root);
  return j;
}

LoadedTree tree_from_json(const nlohmann::json& j) {
  LoadedTree loaded;
  std::vector<FeatureDef> defs;
  for (const auto& def : j.at("schema"))
    defs.push_back({def.at("name").get<std::string>(),
                    def.at("kind").get<std::string>() == "nominal" ? FeatureKind::Nominal
                                                                   : FeatureKind::Numeric});
  loaded.schema = FeatureSchema(std::move(defs));
  loaded.dictionaries = j.at("dictionaries").get<std::vector<std::vector<std::string>>>();
  loaded.class_names = j.at("classes").get<std::vector<std::string>>();
  loaded.root = node_from_json(j.at("tree"));
  return loaded;
}

}  // namespace bartle
