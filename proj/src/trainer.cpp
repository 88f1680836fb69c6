#include "fairkit/trainer.hpp"

#include "fairkit/error.hpp"

namespace fairkit {

std::unique_ptr<Model> train_model(const Dataset& data, const TrainerSpec& spec) {
  switch (spec.kind) {
    case TrainerSpec::Kind::naive_bayes:
      return std::make_unique<NaiveBayesModel>(NaiveBayesModel::fit(data, spec.naive_bayes));
    case TrainerSpec::Kind::logistic:
      return std::make_unique<LogisticModel>(LogisticModel::fit(data, spec.logistic));
    case TrainerSpec::Kind::prejudice_remover:
      return std::make_unique<LogisticModel>(
          LogisticModel::fit_prejudice(data, spec.logistic, spec.prejudice));
    case TrainerSpec::Kind::adversarial:
      return std::make_unique<AdversarialModel>(AdversarialModel::fit(data, spec.adversarial));
  }
  throw Error(Errc::internal, "unhandled trainer kind");
}

TrainerSpec::Kind parse_trainer_kind(const std::string& name) {
  if (name == "naive_bayes") return TrainerSpec::Kind::naive_bayes;
  if (name == "logistic") return TrainerSpec::Kind::logistic;
  if (name == "prejudice_remover") return TrainerSpec::Kind::prejudice_remover;
  if (name == "adversarial") return TrainerSpec::Kind::adversarial;
  throw Error(Errc::invalid_config, "unknown classifier '" + name + "'");
}

const char* to_string(TrainerSpec::Kind kind) {
  switch (kind) {
    case TrainerSpec::Kind::naive_bayes: return "naive_bayes";
    case TrainerSpec::Kind::logistic: return "logistic";
    case TrainerSpec::Kind::prejudice_remover: return "prejudice_remover";
    case TrainerSpec::Kind::adversarial: return "adversarial";
  }
  return "?";
}

}  // namespace fairkit
