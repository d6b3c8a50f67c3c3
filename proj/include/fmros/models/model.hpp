#pragma once

#include <string>
#include <variant>

#include "fmros/models/boost.hpp"
#include "fmros/models/forest.hpp"
#include "fmros/models/linear.hpp"

namespace fmros {

using AnyModel = std::variant<LinearModel, ForestModel, BoostModel>;

inline constexpr const char* kModelFamilies[] = {"linear", "forest", "boost"};

std::string model_family(const AnyModel& model);

std::vector<double> predict(const AnyModel& model, const ModelDataset& data);

// Self-describing JSON: family tag, hyperparameters, coefficient/tree arrays.
void save_model_json(const AnyModel& model, const std::string& path);
AnyModel load_model_json(const std::string& path);

}  // namespace fmros
