#include "survkit/model_api.hpp"

#include <algorithm>
#include <cmath>

#include "survkit/cox.hpp"
#include "survkit/errors.hpp"
#include "survkit/gradient_boosting.hpp"
#include "survkit/rsf.hpp"

namespace survkit {

const char* method_name(Method m) {
  switch (m) {
    case Method::CoxPH: return "coxph";
    case Method::CoxNet: return "coxnet";
    case Method::RSF: return "rsf";
    case Method::GBCox: return "gbcox";
  }
  return "?";
}

Method parse_method(const std::string& name) {
  if (name == "coxph") return Method::CoxPH;
  if (name == "coxnet") return Method::CoxNet;
  if (name == "rsf") return Method::RSF;
  if (name == "gbcox") return Method::GBCox;
  throw Error(ErrorCode::ConfigError, "unknown method '" + name + "'");
}

namespace {

class ParamReader {
 public:
  explicit ParamReader(const HyperParams& params) : params_(params) {}

  double get(const std::string& name, double fallback) {
    seen_.push_back(name);
    const auto it = params_.find(name);
    return it == params_.end() ? fallback : it->second;
  }

  int get_int(const std::string& name, int fallback) {
    return static_cast<int>(std::lround(get(name, static_cast<double>(fallback))));
  }

  void finish(const char* method) const {
    for (const auto& [name, value] : params_) {
      (void)value;
      if (std::find(seen_.begin(), seen_.end(), name) == seen_.end()) {
        throw Error(ErrorCode::ConfigError,
                    std::string("unknown hyperparameter '") + name + "' for " + method);
      }
    }
  }

 private:
  const HyperParams& params_;
  std::vector<std::string> seen_;
};

class CoxFitted final : public FittedModel {
 public:
  explicit CoxFitted(CoxModel model) : model_(std::move(model)) {}
  SurvivalPredictionMatrix predict_survival(const Eigen::MatrixXd& X,
                                            const TimeGrid& grid) const override {
    return cox_predict(model_, X, grid).first;
  }
  std::optional<RiskVector> predict_risk(const Eigen::MatrixXd& X) const override {
    return cox_risk(model_, X);
  }
  const CoxModel& model() const { return model_; }

 private:
  CoxModel model_;
};

class RSFFitted final : public FittedModel {
 public:
  explicit RSFFitted(RSFModel model) : model_(std::move(model)) {}
  SurvivalPredictionMatrix predict_survival(const Eigen::MatrixXd& X,
                                            const TimeGrid& grid) const override {
    return rsf_predict(model_, X, grid);
  }
  std::optional<RiskVector> predict_risk(const Eigen::MatrixXd&) const override {
    return std::nullopt;  // non-PH: no fixed scalar ranking
  }

 private:
  RSFModel model_;
};

class GBCoxFitted final : public FittedModel {
 public:
  explicit GBCoxFitted(GradientBoostedCoxModel model) : model_(std::move(model)) {}
  SurvivalPredictionMatrix predict_survival(const Eigen::MatrixXd& X,
                                            const TimeGrid& grid) const override {
    return gbcox_predict(model_, X, grid).first;
  }
  std::optional<RiskVector> predict_risk(const Eigen::MatrixXd& X) const override {
    return gbcox_risk(model_, X);
  }

 private:
  GradientBoostedCoxModel model_;
};

}  // namespace

std::unique_ptr<FittedModel> fit_model(Method method, const SurvivalDataset& train,
                                       const HyperParams& params, uint64_t seed, int threads) {
  ParamReader reader(params);
  switch (method) {
    case Method::CoxPH: {
      CoxFitOptions opts;
      opts.ridge_eps = reader.get("ridge_eps", 1e-6);
      reader.finish("coxph");
      return std::make_unique<CoxFitted>(fit_cox(train, opts));
    }
    case Method::CoxNet: {
      ElasticNetConfig cfg;
      cfg.l1_ratio = reader.get("l1_ratio", 1.0);
      const double frac = reader.get("lambda_frac", 0.01);
      reader.finish("coxnet");
      cfg.lambda = frac * coxnet_lambda_max(train, cfg.l1_ratio);
      return std::make_unique<CoxFitted>(fit_coxnet(train, cfg));
    }
    case Method::RSF: {
      RSFParams rp;
      rp.n_trees = reader.get_int("n_trees", 200);
      rp.mtry = reader.get_int("mtry", 0);
      rp.min_leaf_size = reader.get_int("min_leaf_size", 15);
      rp.max_depth = reader.get_int("max_depth", -1);
      reader.finish("rsf");
      rp.seed = seed;
      rp.threads = threads;
      return std::make_unique<RSFFitted>(fit_rsf(train, rp));
    }
    case Method::GBCox: {
      GBCoxParams gp;
      gp.n_stages = reader.get_int("n_stages", 200);
      gp.learning_rate = reader.get("learning_rate", 0.1);
      gp.max_depth = reader.get_int("max_depth", 3);
      gp.subsample = reader.get("subsample", 1.0);
      reader.finish("gbcox");
      gp.seed = seed;
      return std::make_unique<GBCoxFitted>(fit_gbcox(train, gp));
    }
  }
  throw Error(ErrorCode::ConfigError, "unhandled method");
}

std::map<std::string, std::vector<double>> default_grid(Method method, Eigen::Index p) {
  switch (method) {
    case Method::CoxPH:
      return {{"ridge_eps", {1e-6}}};
    case Method::CoxNet: {
      std::vector<double> fracs;
      for (int k = 0; k < 8; ++k) {
        fracs.push_back(std::pow(10.0, -3.0 * static_cast<double>(k) / 7.0));
      }
      return {{"l1_ratio", {0.1, 0.5, 0.9, 1.0}}, {"lambda_frac", fracs}};
    }
    case Method::RSF: {
      const double root = std::ceil(std::sqrt(static_cast<double>(p)));
      const double third = std::max(1.0, std::floor(static_cast<double>(p) / 3.0));
      std::vector<double> mtry = {root};
      if (third != root) mtry.push_back(third);
      return {{"n_trees", {200}}, {"mtry", mtry}, {"min_leaf_size", {10, 25}}};
    }
    case Method::GBCox:
      return {{"n_stages", {100, 300}}, {"learning_rate", {0.05, 0.1}}, {"max_depth", {2, 3}}};
  }
  throw Error(ErrorCode::ConfigError, "unhandled method");
}

TimeGrid event_quantile_grid(const SurvivalDataset& train, int knots) {
  std::vector<double> ev;
  for (std::size_t i = 0; i < train.times.size(); ++i) {
    if (train.events[i]) ev.push_back(train.times[i]);
  }
  if (ev.empty()) {
    throw Error(ErrorCode::NoEventsObserved, "cannot build a grid without events");
  }
  std::sort(ev.begin(), ev.end());
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(knots));
  for (int j = 0; j < knots; ++j) {
    const double q = knots == 1 ? 0.0 : static_cast<double>(j) / (knots - 1);
    const double h = (static_cast<double>(ev.size()) - 1.0) * q;
    const auto lo = static_cast<std::size_t>(h);
    const double frac = h - static_cast<double>(lo);
    double v = ev[lo];
    if (lo + 1 < ev.size()) v += frac * (ev[lo + 1] - ev[lo]);
    if (out.empty() || v > out.back()) out.push_back(v);
  }
  return TimeGrid(std::move(out));
}

}  // namespace survkit
