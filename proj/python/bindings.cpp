#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "adsbrange/channel.hpp"
#include "adsbrange/config.hpp"
#include "adsbrange/em.hpp"
#include "adsbrange/errors.hpp"
#include "adsbrange/extract.hpp"
#include "adsbrange/gm_model.hpp"
#include "adsbrange/harness.hpp"
#include "adsbrange/observation_io.hpp"
#include "adsbrange/pipeline.hpp"
#include "adsbrange/reorder.hpp"
#include "adsbrange/waveform.hpp"

namespace py = pybind11;
using namespace adsbrange;

namespace {

Scenario scenario_from_dict(const py::object& obj) {
  const std::string text = py::module_::import("json").attr("dumps")(obj).cast<std::string>();
  return scenario_from_json(nlohmann::json::parse(text));
}

py::object to_python(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

py::dict record_dict(const TrialRecord& r) {
  std::ostringstream os;
  write_record_jsonl(os, r);
  return to_python(nlohmann::json::parse(os.str()));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Range and phase-offset estimation from collided ADS-B packets";

  py::register_exception<InputShapeError>(m, "InputShapeError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ConfigurationError>(m, "ConfigurationError", PyExc_ValueError);
  py::register_exception<CapabilityError>(m, "CapabilityError", PyExc_NotImplementedError);

  m.attr("WAVELENGTH") = kAdsbWavelength;

  m.def("build_packet", [](const std::vector<Chip>& bits) {
    const auto p = build_packet(PayloadBits(bits));
    return std::vector<Chip>(p.begin(), p.end());
  }, py::arg("payload"));
  m.def("apply_delay", [](const std::vector<Chip>& packet, int m, int M) {
    if (packet.size() != kPacketChips) throw InputShapeError("packet must have 240 chips");
    PacketChips p;
    std::copy(packet.begin(), packet.end(), p.begin());
    return apply_delay(p, m, M).x;
  }, py::arg("packet"), py::arg("m"), py::arg("M"));

  m.def("path_loss", &path_loss, py::arg("r"), py::arg("lambda_c") = kAdsbWavelength);
  m.def("snr_to_sigma2", [](double g, const std::vector<double>& p, const std::vector<double>& r, double lambda) {
    return snr_to_sigma2(g, p, r, lambda);
  }, py::arg("gamma_db"), py::arg("powers"), py::arg("mean_ranges"), py::arg("lambda_c") = kAdsbWavelength);

  m.def("synthesize",
        [](const std::vector<double>& ranges, const std::vector<double>& powers, const RealMatrix& theta,
           const std::vector<int>& delays, double sigma2, int M, std::uint64_t seed, double lambda) {
          const auto K = ranges.size();
          if (powers.size() != K || delays.size() != K || static_cast<std::size_t>(theta.cols()) != K) {
            throw InputShapeError("ranges, powers, delays and theta columns must agree");
          }
          std::vector<DroneTruth> drones;
          for (std::size_t k = 0; k < K; ++k) {
            DroneTruth d{powers[k], ranges[k], {}, delays[k]};
            for (Eigen::Index l = 0; l < theta.rows(); ++l) d.theta.push_back(theta(l, static_cast<Eigen::Index>(k)));
            drones.push_back(d);
          }
          const auto s = synthesize(drones, NoiseParams{sigma2, seed}, lambda, M, static_cast<int>(theta.rows()),
                                    seed ^ 0x5eedULL);
          return py::make_tuple(s.window.Y, s.H);
        },
        py::arg("ranges"), py::arg("powers"), py::arg("theta"), py::arg("delays"), py::arg("sigma2"),
        py::arg("M") = 20, py::arg("seed") = 0, py::arg("lambda_c") = kAdsbWavelength);

  m.def("bernoulli_p", [](int M) { return bernoulli_p(M).p; }, py::arg("M"));
  m.def("mixture_weights", &mixture_weights, py::arg("p"), py::arg("K"));
  m.def("mode_vector", &mode_vector, py::arg("h"));
  m.def("singleton_index", &singleton_index, py::arg("k"), py::arg("K"));
  m.def("gm_logpdf", [](Complex y, const RealVector& w, const ComplexVector& modes, double sigma2) {
    if (w.size() != modes.size()) throw InputShapeError("weights and modes differ in length");
    return gm_logpdf(y, GaussianMixtureSpec{0, w, modes, sigma2});
  }, py::arg("y"), py::arg("weights"), py::arg("modes"), py::arg("sigma2"));

  m.def("run_em",
        [](const ComplexMatrix& Y, const RealVector& w, double sigma2, std::uint64_t seed, int restarts,
           int max_iterations, double epsilon, bool independent) {
          EmConfig cfg;
          cfg.seed = seed;
          cfg.restarts = restarts;
          cfg.max_iterations = max_iterations;
          cfg.epsilon = epsilon;
          cfg.coupling = independent ? AntennaCoupling::independent : AntennaCoupling::joint;
          const auto r = run_em(Y, w, sigma2, cfg);
          py::dict d;
          d["eta"] = r.eta;
          d["loglik"] = r.loglik;
          d["iterations"] = r.iterations;
          d["restarts_ok"] = r.restarts_ok;
          d["failed"] = r.failed;
          return d;
        },
        py::arg("Y"), py::arg("weights"), py::arg("sigma2"), py::arg("seed") = 0, py::arg("restarts") = 10,
        py::arg("max_iterations") = 200, py::arg("epsilon") = 1e-6, py::arg("independent") = false);

  m.def("reorder", [](const ComplexVector& eta, int K, const std::string& method) {
    const auto r = reorder(eta, K, parse_reorder_method(method));
    py::dict d;
    d["h"] = r.h;
    d["residual"] = r.residual;
    d["zero_index"] = r.zero_index;
    d["fallback"] = r.fallback;
    d["exhaustive"] = r.exhaustive;
    return d;
  }, py::arg("eta"), py::arg("K"), py::arg("method") = "ls_constrained");

  m.def("estimate_range", &estimate_range, py::arg("mu"), py::arg("power"), py::arg("lambda_c") = kAdsbWavelength);
  m.def("estimate_phase", &estimate_phase, py::arg("mu"));
  m.def("combine_magnitudes", [](const std::vector<double>& mags, bool mad, double cutoff) {
    return combine_magnitudes(mags, mad ? OutlierFilter::mad(cutoff) : OutlierFilter::none());
  }, py::arg("magnitudes"), py::arg("mad") = true, py::arg("cutoff") = 3.0);

  m.def("estimate_window",
        [](const ComplexMatrix& Y, const std::vector<double>& powers, double sigma2, int M, std::uint64_t seed,
           const std::string& method, double lambda) {
          ObservationWindow w{Y, lambda, static_cast<int>(powers.size()), M};
          EstimatorConfig cfg;
          cfg.powers = powers;
          cfg.sigma2 = sigma2;
          cfg.em.seed = seed;
          cfg.reorder = parse_reorder_method(method);
          const auto e = estimate_window(w, cfg);
          py::dict d;
          d["range"] = e.range;
          d["phase"] = e.phase;
          d["singletons"] = e.singletons;
          d["failed"] = e.failed;
          return d;
        },
        py::arg("Y"), py::arg("powers"), py::arg("sigma2") = 0.0, py::arg("M") = 20, py::arg("seed") = 0,
        py::arg("method") = "ls_constrained", py::arg("lambda_c") = kAdsbWavelength);

  m.def("encode_window", [](const ComplexMatrix& Y, int K, int M, double lambda) {
    const auto bytes = encode_window(ObservationWindow{Y, lambda, K, M});
    return py::bytes(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  }, py::arg("Y"), py::arg("K"), py::arg("M"), py::arg("lambda_c") = kAdsbWavelength);
  m.def("decode_window", [](const py::bytes& b) {
    const std::string s = b;
    const auto w = decode_window(std::vector<std::uint8_t>(s.begin(), s.end()));
    return py::make_tuple(w.Y, w.K, w.M, w.lambda_c);
  }, py::arg("data"));

  m.def("preset_scenario", [](int id) { return to_python(scenario_to_json(preset_scenario(id))); }, py::arg("id"));
  m.def("run_sweep", [](const py::object& scenario) {
    const Scenario s = scenario_from_dict(scenario);
    s.validate();
    const auto r = run_sweep(s);
    std::ostringstream csv;
    write_report_csv(csv, r.report);
    py::list records;
    for (const auto& rec : r.records) records.append(record_dict(rec));
    py::dict d;
    d["csv"] = csv.str();
    d["records"] = records;
    d["failure_rate"] = r.report.failure_rate();
    return d;
  }, py::arg("scenario"));
  m.def("tracking_range", &tracking_range, py::arg("k"), py::arg("n"));
}
