#include "dgsam/harness/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "dgsam/errors.hpp"

namespace dgsam::harness {
namespace {

/// Reads keys from one JSON object and rejects any key it was not asked about.
class ObjectReader {
 public:
  ObjectReader(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_ + ": expected an object");
  }

  template <typename T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).template get<T>();
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(path_ + "." + key + ": " + e.what());
    }
  }

  const Json* child(const char* key) {
    seen_.insert(key);
    return j_.contains(key) ? &j_.at(key) : nullptr;
  }

  std::string path(const char* key) const { return path_ + "." + key; }

  void finish() const {
    for (const auto& item : j_.items()) {
      if (!seen_.count(item.key())) {
        throw ConfigError(path_ + ": unknown key '" + item.key() + "'");
      }
    }
  }

 private:
  const Json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

Eigen::MatrixXd matrix_from(const std::vector<std::vector<double>>& rows, const std::string& where) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (static_cast<Eigen::Index>(rows[static_cast<std::size_t>(i)].size()) != n) {
      throw ConfigError(where + ": matrices must be square");
    }
    for (Eigen::Index k = 0; k < n; ++k) m(i, k) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
  }
  return m;
}

std::vector<std::vector<double>> rows_of(const Eigen::MatrixXd& m) {
  std::vector<std::vector<double>> out(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index k = 0; k < m.cols(); ++k) out[static_cast<std::size_t>(i)].push_back(m(i, k));
  }
  return out;
}

PointSpec parse_point(const Json& j, const std::string& path) {
  PointSpec p;
  if (j.is_array()) {
    p.kind = PointSpec::Kind::Explicit;
    try {
      p.values = j.get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(path + ": " + e.what());
    }
    return p;
  }
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "flat_minimum") p.kind = PointSpec::Kind::FlatMinimum;
    else if (s == "fake_flat_minimum") p.kind = PointSpec::Kind::FakeFlatMinimum;
    else if (s == "anchor") p.kind = PointSpec::Kind::Anchor;
    else if (s == "initializer") p.kind = PointSpec::Kind::Initializer;
    else throw ConfigError(path + ": unknown point '" + s + "'");
    return p;
  }
  ObjectReader r(j, path);
  r.get("label", p.label);
  if (const Json* v = r.child("values")) {
    PointSpec inner = parse_point(*v, r.path("values"));
    p.kind = inner.kind;
    p.values = inner.values;
  }
  r.get("manifest", p.manifest);
  r.get("run", p.run);
  if (!p.manifest.empty() || !p.run.empty()) {
    if (p.manifest.empty() || p.run.empty()) {
      throw ConfigError(path + ": checkpoints need both 'manifest' and 'run'");
    }
    p.kind = PointSpec::Kind::Checkpoint;
  }
  r.finish();
  return p;
}

Json point_to_json(const PointSpec& p) {
  Json base;
  switch (p.kind) {
    case PointSpec::Kind::Explicit: base = p.values; break;
    case PointSpec::Kind::FlatMinimum: base = "flat_minimum"; break;
    case PointSpec::Kind::FakeFlatMinimum: base = "fake_flat_minimum"; break;
    case PointSpec::Kind::Anchor: base = "anchor"; break;
    case PointSpec::Kind::Initializer: base = "initializer"; break;
    case PointSpec::Kind::Checkpoint: {
      Json o;
      o["manifest"] = p.manifest;
      o["run"] = p.run;
      if (!p.label.empty()) o["label"] = p.label;
      return o;
    }
  }
  if (p.label.empty()) return base;
  Json o;
  o["values"] = base;
  o["label"] = p.label;
  return o;
}

void parse_fake_flat(const Json& j, FakeFlatParams& p) {
  ObjectReader r(j, "problem.fake_flat");
  r.get("depth1", p.depth1);
  r.get("depth2", p.depth2);
  r.get("width1", p.width1);
  r.get("width2", p.width2);
  r.get("slope_width", p.slope_width);
  r.get("slope_scale", p.slope_scale);
  r.get("center1", p.center1);
  r.get("center2", p.center2);
  r.finish();
}

void parse_quadratic(const Json& j, QuadraticDomainEnsemble& e) {
  ObjectReader r(j, "problem.quadratic");
  std::vector<std::vector<std::vector<double>>> hessians;
  std::vector<std::vector<double>> gradients;
  std::vector<double> anchor;
  r.get("hessians", hessians);
  r.get("anchor_gradients", gradients);
  r.get("anchor", anchor);
  r.get("force_zero_total_gradient", e.force_zero_total_gradient);
  r.finish();
  e.hessians.clear();
  for (const auto& h : hessians) e.hessians.push_back(matrix_from(h, "problem.quadratic.hessians"));
  e.anchor_gradients.clear();
  for (const auto& g : gradients) e.anchor_gradients.emplace_back(g);
  if (!anchor.empty()) {
    e.anchor = ParameterVector(anchor);
  } else if (!e.hessians.empty()) {
    e.anchor = ParameterVector::zeros(static_cast<std::size_t>(e.hessians.front().rows()));
  }
  if (e.hessians.empty()) throw ConfigError("problem.quadratic: need at least one Hessian");
  e.validate();
}

void parse_mlp(const Json& j, MlpSpec& m) {
  ObjectReader r(j, "problem.mlp");
  r.get("layers", m.architecture.layer_sizes);
  r.get("held_out", m.held_out);
  r.get("dataset_csv", m.dataset_csv);
  if (const Json* d = r.child("dataset")) {
    ObjectReader dr(*d, "problem.mlp.dataset");
    dr.get("domains", m.dataset.domains);
    dr.get("points_per_domain", m.dataset.points_per_domain);
    dr.get("separation", m.dataset.separation);
    dr.get("blob_std", m.dataset.blob_std);
    dr.get("rotation_step", m.dataset.rotation_step);
    dr.get("shift_step", m.dataset.shift_step);
    dr.get("seed", m.dataset.seed);
    dr.finish();
  }
  r.finish();
  m.architecture.validate();
}

FiniteSupportDomainSpec parse_finite_support_domain(const Json& j, const std::string& path) {
  FiniteSupportDomainSpec d;
  ObjectReader r(j, path);
  std::string loss = "linear";
  r.get("loss", loss);
  d.loss = pointwise_loss_from_string(loss);
  r.get("points", d.points);
  r.get("labels", d.labels);
  r.get("probabilities", d.probabilities);
  std::vector<double> box{d.box_lower, d.box_upper};
  r.get("box", box);
  if (box.size() != 2) throw ConfigError(path + ".box: expected [lower, upper]");
  d.box_lower = box[0];
  d.box_upper = box[1];
  if (const Json* b = r.child("declared")) {
    LossBounds lb;
    ObjectReader br(*b, path + ".declared");
    br.get("M", lb.M);
    br.get("G", lb.G);
    br.get("Lx", lb.Lx);
    br.finish();
    d.declared = lb;
  }
  r.finish();
  return d;
}

void parse_problem(const Json& j, ProblemSpec& p) {
  ObjectReader r(j, "problem");
  std::string family = "fake_flat";
  r.get("family", family);
  if (family == "fake_flat") p.family = ProblemSpec::Family::FakeFlat;
  else if (family == "quadratic") p.family = ProblemSpec::Family::Quadratic;
  else if (family == "mlp") p.family = ProblemSpec::Family::Mlp;
  else if (family == "finite_support") p.family = ProblemSpec::Family::FiniteSupport;
  else throw ConfigError("problem.family: unknown family '" + family + "'");
  if (const Json* c = r.child("fake_flat")) parse_fake_flat(*c, p.fake_flat);
  if (const Json* c = r.child("quadratic")) parse_quadratic(*c, p.quadratic);
  if (const Json* c = r.child("mlp")) parse_mlp(*c, p.mlp);
  if (const Json* c = r.child("finite_support")) {
    if (!c->is_array()) throw ConfigError("problem.finite_support: expected a list of domains");
    p.finite_support.clear();
    for (std::size_t i = 0; i < c->size(); ++i) {
      p.finite_support.push_back(
          parse_finite_support_domain((*c)[i], "problem.finite_support[" + std::to_string(i) + "]"));
    }
  }
  r.finish();
  if (p.family == ProblemSpec::Family::Quadratic && p.quadratic.hessians.empty()) {
    throw ConfigError("problem.quadratic section is required for the quadratic family");
  }
  if (p.family == ProblemSpec::Family::FiniteSupport && p.finite_support.empty()) {
    throw ConfigError("problem.finite_support section is required for the finite_support family");
  }
  p.fake_flat.validate();
}

void parse_initializer(const Json& j, InitializerSpec& init) {
  ObjectReader r(j, "initializer");
  std::string kind = "uniform";
  r.get("kind", kind);
  if (kind == "point") init.kind = InitializerSpec::Kind::Point;
  else if (kind == "uniform") init.kind = InitializerSpec::Kind::Uniform;
  else if (kind == "network") init.kind = InitializerSpec::Kind::Network;
  else throw ConfigError("initializer.kind: unknown kind '" + kind + "'");
  r.get("values", init.values);
  r.get("low", init.low);
  r.get("high", init.high);
  r.finish();
  if (init.kind == InitializerSpec::Kind::Point && init.values.empty()) {
    throw ConfigError("initializer: kind 'point' needs values");
  }
  if (!(init.low < init.high)) throw ConfigError("initializer: low must be < high");
}

OptimizerSpec parse_optimizer(const Json& j, const std::string& path) {
  OptimizerSpec o;
  ObjectReader r(j, path);
  std::string kind = "dgsam";
  r.get("kind", kind);
  o.config.kind = optimizer_kind_from_string(kind);
  r.get("learning_rate", o.config.learning_rate);
  r.get("perturbation_radius", o.config.perturbation_radius);
  r.get("batch_size", o.config.batch_size);
  r.get("max_iterations", o.config.max_iterations);
  r.get("zero_gradient_tolerance", o.config.zero_gradient_tolerance);
  r.get("grad_norm_tolerance", o.grad_norm_tolerance);
  r.finish();
  o.config.validate();
  return o;
}

void parse_sharpness(const Json& j, SharpnessEstimatorConfig& s) {
  ObjectReader r(j, "sharpness");
  r.get("radius", s.radius);
  std::string method = to_string(s.method);
  r.get("method", method);
  s.method = sharpness_method_from_string(method);
  r.get("ascent_steps", s.ascent_steps);
  if (const Json* v = r.child("step_size")) {
    if (!v->is_null()) s.step_size = v->get<double>();
  }
  r.get("restarts", s.restarts);
  r.get("random_samples", s.random_samples);
  r.get("seed", s.seed);
  r.finish();
  s.validate();
}

void parse_spectrum(const Json& j, SpectrumSpec& s) {
  ObjectReader r(j, "spectrum");
  if (const Json* p = r.child("point")) s.point = parse_point(*p, "spectrum.point");
  r.get("domain", s.domain);
  r.get("probes", s.lanczos.probes);
  r.get("iterations", s.lanczos.iterations);
  std::string probe = s.lanczos.probe_kind == ProbeKind::Rademacher ? "rademacher" : "gaussian";
  r.get("probe_kind", probe);
  if (probe == "rademacher") s.lanczos.probe_kind = ProbeKind::Rademacher;
  else if (probe == "gaussian") s.lanczos.probe_kind = ProbeKind::Gaussian;
  else throw ConfigError("spectrum.probe_kind: expected 'rademacher' or 'gaussian'");
  r.get("smoothing_fraction", s.lanczos.smoothing_fraction);
  r.get("grid_points", s.lanczos.grid_points);
  r.get("seed", s.lanczos.seed);
  r.get("hutchinson_probes", s.hutchinson_probes);
  r.finish();
  s.lanczos.validate();
  if (s.hutchinson_probes < 2) throw ConfigError("spectrum.hutchinson_probes must be >= 2");
}

}  // namespace

ExperimentConfig parse_config(const Json& j) {
  ExperimentConfig c;
  ObjectReader r(j, "config");
  if (const Json* p = r.child("problem")) parse_problem(*p, c.problem);
  if (const Json* p = r.child("initializer")) parse_initializer(*p, c.initializer);
  if (const Json* p = r.child("optimizers")) {
    if (!p->is_array()) throw ConfigError("optimizers: expected a list");
    for (std::size_t i = 0; i < p->size(); ++i) {
      c.optimizers.push_back(parse_optimizer((*p)[i], "optimizers[" + std::to_string(i) + "]"));
    }
  }
  r.get("seeds", c.seeds);
  if (c.seeds.empty()) throw ConfigError("seeds: need at least one seed");
  r.get("trajectory_stride", c.trajectory_stride);
  if (c.trajectory_stride == 0) throw ConfigError("trajectory_stride must be >= 1");
  r.get("record_wall_clock", c.record_wall_clock);
  if (const Json* p = r.child("sharpness")) parse_sharpness(*p, c.sharpness);

  if (const Json* p = r.child("perturb_trace")) {
    ObjectReader pr(*p, "perturb_trace");
    pr.get("rho", c.perturb_trace.rho);
    pr.get("sweeps", c.perturb_trace.sweeps);
    if (const Json* q = pr.child("point")) c.perturb_trace.point = parse_point(*q, "perturb_trace.point");
    pr.finish();
    if (!(c.perturb_trace.rho >= 0.0)) throw ConfigError("perturb_trace.rho must be >= 0");
    if (c.perturb_trace.sweeps == 0) throw ConfigError("perturb_trace.sweeps must be >= 1");
  }
  if (const Json* p = r.child("sharpness_table")) {
    ObjectReader pr(*p, "sharpness_table");
    if (const Json* q = pr.child("points")) {
      if (!q->is_array()) throw ConfigError("sharpness_table.points: expected a list");
      for (std::size_t i = 0; i < q->size(); ++i) {
        c.sharpness_table.points.push_back(
            parse_point((*q)[i], "sharpness_table.points[" + std::to_string(i) + "]"));
      }
    }
    pr.finish();
  }
  if (const Json* p = r.child("cost")) {
    ObjectReader pr(*p, "cost");
    pr.get("warmup", c.cost.warmup);
    pr.get("timed", c.cost.timed);
    pr.finish();
    if (c.cost.timed == 0) throw ConfigError("cost.timed must be >= 1");
  }
  if (const Json* p = r.child("landscape")) {
    ObjectReader pr(*p, "landscape");
    if (const Json* q = pr.child("center")) c.landscape.center = parse_point(*q, "landscape.center");
    pr.get("directions", c.landscape.directions);
    pr.get("dir1", c.landscape.dir1);
    pr.get("dir2", c.landscape.dir2);
    pr.get("half_width", c.landscape.half_width);
    pr.get("resolution", c.landscape.resolution);
    pr.finish();
    const auto& d = c.landscape.directions;
    if (d != "random" && d != "axis" && d != "explicit") {
      throw ConfigError("landscape.directions: expected 'random', 'axis' or 'explicit'");
    }
    if (d == "explicit" && (c.landscape.dir1.empty() || c.landscape.dir2.empty())) {
      throw ConfigError("landscape: explicit directions need dir1 and dir2");
    }
    if (c.landscape.resolution < 2) throw ConfigError("landscape.resolution must be >= 2");
    if (!(c.landscape.half_width > 0.0)) throw ConfigError("landscape.half_width must be > 0");
  }
  if (const Json* p = r.child("spectrum")) parse_spectrum(*p, c.spectrum);
  if (const Json* p = r.child("verify_theory")) {
    ObjectReader pr(*p, "verify_theory");
    pr.get("theorem1_instances", c.verify_theory.theorem1_instances);
    pr.get("violation_thetas", c.verify_theory.violation_thetas);
    pr.get("prop1_rhos", c.verify_theory.prop1_rhos);
    pr.get("stationarity_epsilons", c.verify_theory.stationarity_epsilons);
    pr.get("stationarity_cap", c.verify_theory.stationarity_cap);
    pr.finish();
  }
  r.get("output_dir", c.output_dir);
  r.finish();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

Json to_json(const ExperimentConfig& c) {
  Json j;
  Json problem;
  switch (c.problem.family) {
    case ProblemSpec::Family::FakeFlat: problem["family"] = "fake_flat"; break;
    case ProblemSpec::Family::Quadratic: problem["family"] = "quadratic"; break;
    case ProblemSpec::Family::Mlp: problem["family"] = "mlp"; break;
    case ProblemSpec::Family::FiniteSupport: problem["family"] = "finite_support"; break;
  }
  const auto& ff = c.problem.fake_flat;
  problem["fake_flat"] = {{"depth1", ff.depth1},         {"depth2", ff.depth2},
                          {"width1", ff.width1},         {"width2", ff.width2},
                          {"slope_width", ff.slope_width}, {"slope_scale", ff.slope_scale},
                          {"center1", ff.center1},       {"center2", ff.center2}};
  if (!c.problem.quadratic.hessians.empty()) {
    Json q;
    Json hs = Json::array();
    for (const auto& h : c.problem.quadratic.hessians) hs.push_back(rows_of(h));
    q["hessians"] = hs;
    Json gs = Json::array();
    for (const auto& g : c.problem.quadratic.anchor_gradients) gs.push_back(g.data());
    q["anchor_gradients"] = gs;
    q["anchor"] = c.problem.quadratic.anchor.data();
    q["force_zero_total_gradient"] = c.problem.quadratic.force_zero_total_gradient;
    problem["quadratic"] = q;
  }
  const auto& m = c.problem.mlp;
  problem["mlp"] = {{"layers", m.architecture.layer_sizes},
                    {"dataset",
                     {{"domains", m.dataset.domains},
                      {"points_per_domain", m.dataset.points_per_domain},
                      {"separation", m.dataset.separation},
                      {"blob_std", m.dataset.blob_std},
                      {"rotation_step", m.dataset.rotation_step},
                      {"shift_step", m.dataset.shift_step},
                      {"seed", m.dataset.seed}}},
                    {"held_out", m.held_out},
                    {"dataset_csv", m.dataset_csv}};
  if (!c.problem.finite_support.empty()) {
    Json list = Json::array();
    for (const auto& d : c.problem.finite_support) {
      Json o;
      o["loss"] = to_string(d.loss);
      o["points"] = d.points;
      o["labels"] = d.labels;
      o["probabilities"] = d.probabilities;
      o["box"] = {d.box_lower, d.box_upper};
      if (d.declared) o["declared"] = {{"M", d.declared->M}, {"G", d.declared->G}, {"Lx", d.declared->Lx}};
      list.push_back(o);
    }
    problem["finite_support"] = list;
  }
  j["problem"] = problem;

  Json init;
  switch (c.initializer.kind) {
    case InitializerSpec::Kind::Point: init["kind"] = "point"; break;
    case InitializerSpec::Kind::Uniform: init["kind"] = "uniform"; break;
    case InitializerSpec::Kind::Network: init["kind"] = "network"; break;
  }
  init["values"] = c.initializer.values;
  init["low"] = c.initializer.low;
  init["high"] = c.initializer.high;
  j["initializer"] = init;

  Json opts = Json::array();
  for (const auto& o : c.optimizers) {
    opts.push_back({{"kind", to_string(o.config.kind)},
                    {"learning_rate", o.config.learning_rate},
                    {"perturbation_radius", o.config.perturbation_radius},
                    {"batch_size", o.config.batch_size},
                    {"max_iterations", o.config.max_iterations},
                    {"zero_gradient_tolerance", o.config.zero_gradient_tolerance},
                    {"grad_norm_tolerance", o.grad_norm_tolerance}});
  }
  j["optimizers"] = opts;
  j["seeds"] = c.seeds;
  j["trajectory_stride"] = c.trajectory_stride;
  j["record_wall_clock"] = c.record_wall_clock;

  const auto& s = c.sharpness;
  j["sharpness"] = {{"radius", s.radius},
                    {"method", to_string(s.method)},
                    {"ascent_steps", s.ascent_steps},
                    {"step_size", s.step_size ? Json(*s.step_size) : Json(nullptr)},
                    {"restarts", s.restarts},
                    {"random_samples", s.random_samples},
                    {"seed", s.seed}};
  j["perturb_trace"] = {{"rho", c.perturb_trace.rho},
                        {"sweeps", c.perturb_trace.sweeps},
                        {"point", point_to_json(c.perturb_trace.point)}};
  Json pts = Json::array();
  for (const auto& p : c.sharpness_table.points) pts.push_back(point_to_json(p));
  j["sharpness_table"] = {{"points", pts}};
  j["cost"] = {{"warmup", c.cost.warmup}, {"timed", c.cost.timed}};
  j["landscape"] = {{"center", point_to_json(c.landscape.center)},
                    {"directions", c.landscape.directions},
                    {"dir1", c.landscape.dir1},
                    {"dir2", c.landscape.dir2},
                    {"half_width", c.landscape.half_width},
                    {"resolution", c.landscape.resolution}};
  const auto& sp = c.spectrum;
  j["spectrum"] = {{"point", point_to_json(sp.point)},
                   {"domain", sp.domain},
                   {"probes", sp.lanczos.probes},
                   {"iterations", sp.lanczos.iterations},
                   {"probe_kind", sp.lanczos.probe_kind == ProbeKind::Rademacher ? "rademacher" : "gaussian"},
                   {"smoothing_fraction", sp.lanczos.smoothing_fraction},
                   {"grid_points", sp.lanczos.grid_points},
                   {"seed", sp.lanczos.seed},
                   {"hutchinson_probes", sp.hutchinson_probes}};
  const auto& v = c.verify_theory;
  j["verify_theory"] = {{"theorem1_instances", v.theorem1_instances},
                        {"violation_thetas", v.violation_thetas},
                        {"prop1_rhos", v.prop1_rhos},
                        {"stationarity_epsilons", v.stationarity_epsilons},
                        {"stationarity_cap", v.stationarity_cap}};
  j["output_dir"] = c.output_dir;
  return j;
}

BuiltProblem build_problem(const ProblemSpec& spec) {
  BuiltProblem b;
  switch (spec.family) {
    case ProblemSpec::Family::FakeFlat:
      b.landscape.emplace(spec.fake_flat);
      b.problem = std::make_shared<MultiDomainProblem>(b.landscape->problem());
      break;
    case ProblemSpec::Family::Quadratic:
      b.ensemble = spec.quadratic;
      b.problem = std::make_shared<MultiDomainProblem>(spec.quadratic.to_problem());
      break;
    case ProblemSpec::Family::Mlp: {
      SyntheticDomainDataset data = [&] {
        if (spec.mlp.dataset_csv.empty()) return SyntheticDomainDataset::generate(spec.mlp.dataset);
        std::ifstream in(spec.mlp.dataset_csv);
        if (!in) throw ConfigError("cannot open dataset CSV '" + spec.mlp.dataset_csv + "'");
        return SyntheticDomainDataset::read_csv(in);
      }();
      for (std::size_t h : spec.mlp.held_out) {
        if (h >= data.domain_count()) throw ConfigError("problem.mlp.held_out: domain index out of range");
      }
      b.architecture = spec.mlp.architecture;
      b.problem = std::make_shared<MultiDomainProblem>(
          make_mlp_problem(data, spec.mlp.architecture, spec.mlp.held_out));
      break;
    }
    case ProblemSpec::Family::FiniteSupport: {
      std::vector<ObjectivePtr> domains;
      for (const auto& d : spec.finite_support) {
        std::vector<ParameterVector> pts;
        for (const auto& x : d.points) pts.emplace_back(x);
        domains.push_back(std::make_shared<FiniteSupportStatLoss>(
            d.loss, std::move(pts), d.labels, d.probabilities, ParameterBox{d.box_lower, d.box_upper},
            std::nullopt, d.declared));
      }
      b.problem = std::make_shared<MultiDomainProblem>(std::move(domains));
      break;
    }
  }
  return b;
}

ParameterVector initial_point(const ExperimentConfig& config, const BuiltProblem& built,
                              std::uint64_t seed) {
  const std::size_t dim = built.problem->dimension();
  const auto& init = config.initializer;
  switch (init.kind) {
    case InitializerSpec::Kind::Point:
      if (init.values.size() != dim) throw ConfigError("initializer.values has the wrong dimension");
      return ParameterVector(init.values);
    case InitializerSpec::Kind::Uniform: {
      SeededRng rng(seed);
      std::vector<double> v(dim);
      for (double& x : v) x = rng.uniform(init.low, init.high);
      return ParameterVector(std::move(v));
    }
    case InitializerSpec::Kind::Network:
      if (!built.architecture) throw ConfigError("initializer 'network' needs the mlp family");
      return built.architecture->initialize(seed);
  }
  throw ConfigError("unknown initializer");
}

ParameterVector resolve_point(const PointSpec& spec, const ExperimentConfig& config,
                              const BuiltProblem& built, std::uint64_t seed) {
  const std::size_t dim = built.problem->dimension();
  ParameterVector out;
  switch (spec.kind) {
    case PointSpec::Kind::Explicit: out = ParameterVector(spec.values); break;
    case PointSpec::Kind::FlatMinimum:
    case PointSpec::Kind::FakeFlatMinimum:
      if (!built.landscape) throw ConfigError("points 'flat_minimum'/'fake_flat_minimum' need the fake_flat family");
      out = spec.kind == PointSpec::Kind::FlatMinimum ? built.landscape->flat_minimum()
                                                      : built.landscape->fake_flat_minimum();
      break;
    case PointSpec::Kind::Anchor:
      if (!built.ensemble) throw ConfigError("point 'anchor' needs the quadratic family");
      out = built.ensemble->anchor;
      break;
    case PointSpec::Kind::Initializer: out = initial_point(config, built, seed); break;
    case PointSpec::Kind::Checkpoint: {
      std::ifstream in(spec.manifest);
      if (!in) throw ConfigError("checkpoint manifest '" + spec.manifest + "' not found");
      Json m;
      try {
        m = Json::parse(in);
      } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("checkpoint manifest '" + spec.manifest + "' is not valid JSON");
      }
      if (!m.contains("runs")) throw ConfigError("checkpoint manifest has no runs");
      for (const auto& r : m.at("runs")) {
        if (r.value("id", "") == spec.run) {
          out = ParameterVector(r.at("final_theta").get<std::vector<double>>());
          break;
        }
      }
      if (out.empty()) throw ConfigError("run '" + spec.run + "' not found in '" + spec.manifest + "'");
      break;
    }
  }
  if (out.size() != dim) throw ConfigError("point " + describe(spec) + " has the wrong dimension");
  return out;
}

std::string describe(const PointSpec& spec) {
  if (!spec.label.empty()) return spec.label;
  switch (spec.kind) {
    case PointSpec::Kind::Explicit: return "point";
    case PointSpec::Kind::FlatMinimum: return "flat_minimum";
    case PointSpec::Kind::FakeFlatMinimum: return "fake_flat_minimum";
    case PointSpec::Kind::Anchor: return "anchor";
    case PointSpec::Kind::Initializer: return "initializer";
    case PointSpec::Kind::Checkpoint: return spec.run;
  }
  return "point";
}

}  // namespace dgsam::harness
