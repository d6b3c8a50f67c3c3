#include "fmros/models/model.hpp"

#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace fmros {

namespace {

using nlohmann::json;

json tree_to_json(const Tree& tree) {
  json nodes = json::array();
  for (const TreeNode& nd : tree.nodes) {
    nodes.push_back({{"f", nd.feature},
                     {"t", nd.threshold},
                     {"l", nd.left},
                     {"r", nd.right},
                     {"v", nd.value}});
  }
  return nodes;
}

Tree tree_from_json(const json& nodes) {
  Tree tree;
  tree.nodes.reserve(nodes.size());
  for (const auto& nd : nodes) {
    tree.nodes.push_back(TreeNode{nd.at("f").get<std::int32_t>(),
                                  nd.at("l").get<std::int32_t>(),
                                  nd.at("r").get<std::int32_t>(),
                                  nd.at("t").get<double>(), nd.at("v").get<double>()});
  }
  if (tree.nodes.empty()) throw std::runtime_error("model file: empty tree");
  return tree;
}

json trees_to_json(const std::vector<Tree>& trees) {
  json out = json::array();
  for (const Tree& t : trees) out.push_back(tree_to_json(t));
  return out;
}

std::vector<Tree> trees_from_json(const json& arr) {
  std::vector<Tree> out;
  out.reserve(arr.size());
  for (const auto& t : arr) out.push_back(tree_from_json(t));
  return out;
}

}  // namespace

std::string model_family(const AnyModel& model) {
  switch (model.index()) {
    case 0: return "linear";
    case 1: return "forest";
    default: return "boost";
  }
}

std::vector<double> predict(const AnyModel& model, const ModelDataset& data) {
  return std::visit([&](const auto& m) { return predict(m, data); }, model);
}

void save_model_json(const AnyModel& model, const std::string& path) {
  json doc;
  doc["family"] = model_family(model);
  if (const auto* lin = std::get_if<LinearModel>(&model)) {
    doc["intercept"] = lin->intercept;
    doc["coefficients"] = lin->coef;
    doc["noise_variance"] = lin->noise_variance;
  } else if (const auto* rf = std::get_if<ForestModel>(&model)) {
    doc["hyperparams"] = {{"n_estimators", rf->params.n_estimators},
                          {"max_depth", rf->params.max_depth},
                          {"min_samples_split", rf->params.min_samples_split},
                          {"min_samples_leaf", rf->params.min_samples_leaf},
                          {"max_features", rf->params.max_features},
                          {"bootstrap", rf->params.bootstrap}};
    doc["n_features"] = rf->n_features;
    doc["trees"] = trees_to_json(rf->trees);
  } else if (const auto* gb = std::get_if<BoostModel>(&model)) {
    doc["hyperparams"] = {{"max_depth", gb->params.max_depth},
                          {"eta", gb->params.eta},
                          {"min_child_weight", gb->params.min_child_weight},
                          {"subsample", gb->params.subsample},
                          {"colsample_bytree", gb->params.colsample_bytree},
                          {"n_estimators", gb->params.n_estimators},
                          {"gamma", gb->params.gamma},
                          {"lambda", gb->params.lambda}};
    doc["n_features"] = gb->n_features;
    doc["base_score"] = gb->base_score;
    doc["trees"] = trees_to_json(gb->trees);
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << doc.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

AnyModel load_model_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json doc;
  in >> doc;
  const std::string family = doc.at("family").get<std::string>();
  if (family == "linear") {
    LinearModel m;
    m.intercept = doc.at("intercept").get<double>();
    m.coef = doc.at("coefficients").get<std::vector<double>>();
    m.noise_variance = doc.value("noise_variance", 0.0);
    return m;
  }
  if (family == "forest") {
    ForestModel m;
    const auto& hp = doc.at("hyperparams");
    m.params.n_estimators = hp.value("n_estimators", m.params.n_estimators);
    m.params.max_depth = hp.value("max_depth", m.params.max_depth);
    m.params.min_samples_split = hp.value("min_samples_split", m.params.min_samples_split);
    m.params.min_samples_leaf = hp.value("min_samples_leaf", m.params.min_samples_leaf);
    m.params.max_features = hp.value("max_features", m.params.max_features);
    m.params.bootstrap = hp.value("bootstrap", m.params.bootstrap);
    m.n_features = doc.value("n_features", std::size_t{kNumPredictors});
    m.trees = trees_from_json(doc.at("trees"));
    return m;
  }
  if (family == "boost") {
    BoostModel m;
    const auto& hp = doc.at("hyperparams");
    m.params.max_depth = hp.value("max_depth", m.params.max_depth);
    m.params.eta = hp.value("eta", m.params.eta);
    m.params.min_child_weight = hp.value("min_child_weight", m.params.min_child_weight);
    m.params.subsample = hp.value("subsample", m.params.subsample);
    m.params.colsample_bytree = hp.value("colsample_bytree", m.params.colsample_bytree);
    m.params.n_estimators = hp.value("n_estimators", m.params.n_estimators);
    m.params.gamma = hp.value("gamma", m.params.gamma);
    m.params.lambda = hp.value("lambda", m.params.lambda);
    m.n_features = doc.value("n_features", std::size_t{kNumPredictors});
    m.base_score = doc.at("base_score").get<double>();
    m.trees = trees_from_json(doc.at("trees"));
    return m;
  }
  throw std::runtime_error(path + ": unknown model family \"" + family + "\"");
}

}  // namespace fmros
