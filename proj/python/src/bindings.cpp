#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "extremesim/cli/campaign.hpp"
#include "extremesim/cli/run_spec.hpp"
#include "extremesim/core/first_passage.hpp"
#include "extremesim/core/lambert_w.hpp"
#include "extremesim/core/mfat.hpp"
#include "extremesim/core/splitting.hpp"
#include "extremesim/emission/emission.hpp"
#include "extremesim/oracle/oracle.hpp"
#include "extremesim/sampler/sampler.hpp"

namespace py = pybind11;
using namespace extremesim;

namespace {

template <class T>
py::array_t<T> to_array(const std::vector<T>& v) {
  return py::array_t<T>(std::vector<py::ssize_t>{static_cast<py::ssize_t>(v.size())}, v.data());
}

// std::vector<bool> has no contiguous storage.
py::array_t<bool> to_bool_array(const std::vector<char>& v) {
  py::array_t<bool> out(std::vector<py::ssize_t>{static_cast<py::ssize_t>(v.size())});
  bool* p = out.mutable_data();
  for (std::size_t i = 0; i < v.size(); ++i) p[i] = v[i] != 0;
  return out;
}

py::dict records_to_dict(const SampleResult& r) {
  std::vector<std::uint64_t> rank, target;
  std::vector<double> time;
  std::vector<char> killed;
  for (const ArrivalRecord& rec : r.records) {
    rank.push_back(rec.rank);
    time.push_back(rec.time);
    target.push_back(rec.target);
    killed.push_back(rec.killed);
  }
  py::dict d;
  d["rank"] = to_array(rank);
  d["time"] = to_array(time);
  d["target"] = to_array(target);
  d["killed"] = to_bool_array(killed);
  d["status"] = std::string(to_string(r.status));
  d["warning"] = r.warning;
  return d;
}

py::dict campaign_to_dict(const cli::RunResult& r) {
  std::vector<std::uint64_t> replica, rank, target;
  std::vector<double> time;
  std::vector<char> killed;
  for (const cli::Row& row : r.records) {
    replica.push_back(row.replica);
    rank.push_back(row.rank);
    target.push_back(row.target);
    time.push_back(row.time);
    killed.push_back(row.killed);
  }
  py::dict d;
  d["replica"] = to_array(replica);
  d["rank"] = to_array(rank);
  d["time"] = to_array(time);
  d["target"] = to_array(target);
  d["killed"] = to_bool_array(killed);
  d["status"] = std::string(to_string(r.status));
  d["warnings"] = r.warnings;
  d["regime"] = r.regime;
  d["seconds"] = r.seconds;
  return d;
}

Geometry make(int dim, double diffusion, const std::vector<double>& delta, const std::vector<double>& size) {
  cli::RunSpec s;
  s.dim = dim;
  s.diffusion = diffusion;
  s.delta = delta;
  s.size = size;
  return cli::make_geometry(s);
}

}  // namespace

PYBIND11_MODULE(_extremesim, m) {
  m.doc() = "Extreme first-passage statistics for many diffusing particles";

  py::register_exception<ValidityError>(m, "ValidityError", PyExc_ValueError);
  py::register_exception<cli::SpecError>(m, "SpecError", PyExc_ValueError);

  py::class_<Geometry>(m, "Geometry")
      .def(py::init(&make), py::arg("dim") = 1, py::arg("diffusion") = 1.0,
           py::arg("delta") = std::vector<double>{1.0}, py::arg("size") = std::vector<double>{})
      .def_property_readonly("dim", &Geometry::dim)
      .def_property_readonly("diffusion", &Geometry::diffusion)
      .def_property_readonly("diffusive_time", &Geometry::diffusive_time)
      .def_property_readonly("target_count", &Geometry::target_count)
      .def("t_max", [](const Geometry& g, double f_max) { return validity_window(g, f_max).t_max; },
           py::arg("f_max") = kDefaultFMax)
      .def("__repr__", [](const Geometry& g) {
        return "Geometry(dim=" + std::to_string(g.dim()) + ", diffusion=" + std::to_string(g.diffusion()) +
               ", targets=" + std::to_string(g.target_count()) + ")";
      });

  m.def("exit_cdf", [](const Geometry& g, double t) { return exit_cdf(g, t).value; }, py::arg("geometry"),
        py::arg("t"));
  m.def("exit_density", &exit_density, py::arg("geometry"), py::arg("t"));
  m.def("invert_exit_cdf", py::overload_cast<const Geometry&, double>(&invert_exit_cdf), py::arg("geometry"),
        py::arg("f"));
  m.def("fastest_survival", &fastest_survival, py::arg("geometry"), py::arg("n"), py::arg("t"));
  m.def("order_statistic_density", &order_statistic_density, py::arg("geometry"), py::arg("n"), py::arg("k"),
        py::arg("t"));
  m.def("lambert_w0", &lambert_w0, py::arg("x"));
  m.def("lambert_wm1", &lambert_wm1, py::arg("x"));

  m.def("mfat_instantaneous", [](const Geometry& g, double n) { return mfat_instantaneous(g, n).value; },
        py::arg("geometry"), py::arg("n"));
  m.def("mfat_emission", [](const Geometry& g, double alpha, double n) {
        return mfat_emission_numerical(g, EmissionProfile(alpha), n).value;
      },
      py::arg("geometry"), py::arg("alpha"), py::arg("n"));
  m.def("classify_regime", [](const Geometry& g, double alpha, double n) {
        const RegimeEstimate r = classify_regime(g, alpha, n);
        py::dict d;
        d["regime"] = std::string(to_string(r.regime));
        d["mfat"] = r.mfat;
        d["numerical"] = r.numerical;
        d["validity"] = r.validity;
        d["warnings"] = r.warnings;
        return d;
      },
      py::arg("geometry"), py::arg("alpha"), py::arg("n"));

  m.def("splitting_integral", &splitting_integral, py::arg("lam"), py::arg("n"));
  m.def("splitting_asymptotic", &splitting_asymptotic, py::arg("lam"), py::arg("n"));

  m.def("sample_first_k",
        [](const Geometry& g, std::uint64_t n, std::uint64_t k, std::uint64_t seed, std::uint32_t replica,
           double gamma, double alpha, double f_max) {
          RngStream rng(seed, replica);
          SamplerOptions options;
          options.f_max = f_max;
          SampleResult r;
          {
            py::gil_scoped_release release;
            if (alpha > 0.0) {
              r = sample_first_k_emission(g, EmissionProfile(alpha), n, k, rng, options);
            } else if (gamma > 0.0) {
              r = sample_first_k_with_killing(g, n, k, KillingSpec{gamma}, rng, options);
            } else {
              r = sample_first_k(g, n, k, rng, options);
            }
          }
          return records_to_dict(r);
        },
        py::arg("geometry"), py::arg("n"), py::arg("k"), py::arg("seed") = 0, py::arg("replica") = 0,
        py::arg("gamma") = 0.0, py::arg("alpha") = 0.0, py::arg("f_max") = kDefaultFMax,
        "First k ordered arrivals of one replica; alpha > 0 selects emission, gamma > 0 killing.");

  m.def("sample",
        [](int dim, double diffusion, std::vector<double> delta, std::vector<double> size, std::uint64_t n,
           std::uint64_t k, std::uint64_t replicas, double gamma, double alpha, std::uint64_t seed, unsigned threads,
           double f_max) {
          cli::RunSpec s;
          s.dim = dim;
          s.diffusion = diffusion;
          s.delta = std::move(delta);
          s.size = std::move(size);
          s.n = n;
          s.k = k;
          s.replicas = replicas;
          s.gamma = gamma;
          s.alpha = alpha;
          s.seed = seed;
          s.threads = threads;
          s.f_max = f_max;
          cli::RunResult r;
          {
            py::gil_scoped_release release;
            r = cli::run_sample_campaign(s);
          }
          return campaign_to_dict(r);
        },
        py::kw_only(), py::arg("dim") = 1, py::arg("diffusion") = 1.0, py::arg("delta") = std::vector<double>{1.0},
        py::arg("size") = std::vector<double>{}, py::arg("n") = 1000, py::arg("k") = 1, py::arg("replicas") = 1,
        py::arg("gamma") = 0.0, py::arg("alpha") = 0.0, py::arg("seed") = 0, py::arg("threads") = 0,
        py::arg("f_max") = kDefaultFMax,
        "Replica campaign; same records (and bytes, given the seed) as the command-line `sample`.");

  m.def("oracle",
        [](double source, std::optional<double> right, double diffusion, double dt, std::uint64_t n, std::uint64_t k,
           double gamma, double alpha, std::uint64_t seed, std::uint32_t replica, bool bridge_correction) {
          OracleSpec s;
          s.source = source;
          s.right = right;
          s.diffusion = diffusion;
          s.dt = dt;
          s.n = n;
          s.k = k;
          s.gamma = gamma;
          s.alpha = alpha;
          s.bridge_correction = bridge_correction;
          SampleResult r;
          {
            py::gil_scoped_release release;
            r = run_oracle(s, RngStream(seed, replica));
          }
          return records_to_dict(r);
        },
        py::kw_only(), py::arg("source") = 1.0, py::arg("right") = py::none(), py::arg("diffusion") = 1.0,
        py::arg("dt") = 1e-4, py::arg("n") = 1000, py::arg("k") = 1, py::arg("gamma") = 0.0, py::arg("alpha") = 0.0,
        py::arg("seed") = 0, py::arg("replica") = 0, py::arg("bridge_correction") = true,
        "Euler-Maruyama reference: absorbers at 0 and (optionally) `right`, particles start at `source`.");
}
