#pragma once

#include <memory>
#include <string>

#include "fairkit/adversarial.hpp"
#include "fairkit/logistic.hpp"
#include "fairkit/model.hpp"
#include "fairkit/naive_bayes.hpp"

namespace fairkit {

// One declarative description of "which classifier, with what knobs" shared
// by the pipeline and the audit module.
struct TrainerSpec {
  enum class Kind { naive_bayes, logistic, prejudice_remover, adversarial };
  Kind kind = Kind::logistic;
  LogisticConfig logistic;
  PrejudiceConfig prejudice;
  AdversarialConfig adversarial;
  NaiveBayesModel::Config naive_bayes;
};

std::unique_ptr<Model> train_model(const Dataset& data, const TrainerSpec& spec);

TrainerSpec::Kind parse_trainer_kind(const std::string& name);
const char* to_string(TrainerSpec::Kind kind);

}  // namespace fairkit
