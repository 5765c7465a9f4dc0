#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hdeuler/calibration.hpp"
#include "hdeuler/config.hpp"
#include "hdeuler/series_io.hpp"
#include "hdeuler/verification.hpp"

namespace py = pybind11;
using namespace hdeuler;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::vector<HalfPlanePoint> points_from(const Array& rz) {
  if (rz.ndim() != 2 || rz.shape(1) != 2) throw py::value_error("expected an (n, 2) array of (r, z)");
  std::vector<HalfPlanePoint> pts(static_cast<std::size_t>(rz.shape(0)));
  auto v = rz.unchecked<2>();
  for (py::ssize_t i = 0; i < rz.shape(0); ++i) pts[i] = {v(i, 0), v(i, 1)};
  return pts;
}

Array velocity_array(const std::vector<VelocitySample>& u) {
  Array out({static_cast<py::ssize_t>(u.size()), py::ssize_t{2}});
  auto w = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < u.size(); ++i) {
    w(i, 0) = u[i].ur;
    w(i, 1) = u[i].uz;
  }
  return out;
}

py::dict record_dict(const DiagnosticsRecord& r) {
  py::dict d;
  d["t"] = r.t;
  d["omega_sup"] = r.omega_sup;
  d["ur_sup"] = r.ur_sup;
  d["S"] = r.S;
  d["R"] = r.R;
  d["xi_l1"] = r.xi_l1;
  d["xi_l2"] = r.xi_l2;
  d["xi_linf"] = r.xi_linf;
  d["r_omega_l1"] = r.r_omega_l1;
  d["rd2_omega_l1"] = r.rd2_omega_l1;
  d["omega_over_rd2_l1"] = r.omega_over_rd2_l1;
  d["angular_impulse"] = r.angular_impulse;
  d["fs_product"] = r.fs_product;
  d["distortion"] = r.distortion;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Kernel, particle induction, simulation and estimate checks for axisymmetric Euler flow in R^d.";
  m.attr("__version__") = HDEULER_VERSION;

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);
  py::register_exception<AccuracyError>(m, "AccuracyError", PyExc_ArithmeticError);

  py::class_<KernelEvaluator>(m, "Kernel")
      .def(py::init([](int d, bool tabulate) {
             KernelOptions o;
             o.tabulate = tabulate;
             return KernelEvaluator(Dimension(d), o);
           }),
           py::arg("d"), py::arg("tabulate") = true)
      .def_property_readonly("d", [](const KernelEvaluator& k) { return k.dimension().value(); })
      .def_property_readonly("c_d", &KernelEvaluator::c_d)
      .def_property_readonly("sphere_area", &KernelEvaluator::sphere_area)
      .def_property_readonly("table_validation_error", &KernelEvaluator::table_validation_error)
      .def("F", &KernelEvaluator::eval_F, py::arg("s"), "F_d(s) by certified quadrature.")
      .def("F_prime", &KernelEvaluator::eval_F_prime, py::arg("s"))
      .def("eval", [](const KernelEvaluator& k, double s) {
        const auto v = k.eval(s);
        return py::make_tuple(v.F, v.F_prime);
      }, py::arg("s"), "(F, F') from the hot path.");

  m.def("tail_coefficient", [](int d) { return tail_coefficient(Dimension(d)); }, py::arg("d"));
  m.def("calibrated_constant", [](int d) { return calibrated_constant(Dimension(d)); }, py::arg("d"));

  py::class_<ParticleSet>(m, "Particles")
      .def_property_readonly("d", [](const ParticleSet& p) { return p.d.value(); })
      .def_property_readonly("delta", [](const ParticleSet& p) { return p.blob.delta; })
      .def("__len__", &ParticleSet::size)
      .def_property_readonly("positions", [](const ParticleSet& p) {
        Array out({static_cast<py::ssize_t>(p.size()), py::ssize_t{2}});
        auto w = out.mutable_unchecked<2>();
        for (std::size_t i = 0; i < p.size(); ++i) {
          w(i, 0) = p.positions[i].r;
          w(i, 1) = p.positions[i].z;
        }
        return out;
      })
      .def_property_readonly("xi", [](const ParticleSet& p) { return Array(p.xi.size(), p.xi.data()); })
      .def_property_readonly("mu", [](const ParticleSet& p) { return Array(p.mu.size(), p.mu.data()); });

  m.def("ring_particles",
        [](int d, const std::string& kind, double r0, double z0, double sigma, double amplitude,
           double separation, std::size_t n, double delta) {
          ProfileSpec p{parse_profile_kind(kind), r0, z0, sigma, amplitude, separation};
          return init_particles(p, Dimension(d), n, delta);
        },
        py::arg("d"), py::arg("kind") = "gaussian_ring", py::arg("r0") = 1.0, py::arg("z0") = 0.0,
        py::arg("sigma") = 0.1, py::arg("amplitude") = 1.0, py::arg("separation") = 0.0,
        py::arg("n_particles") = 4096, py::arg("delta") = 0.05);

  m.def("rescale", &rescale, py::arg("particles"), py::arg("lam"), py::arg("z0"));

  m.def("velocity_field",
        [](const KernelEvaluator& k, const ParticleSet& p, const Array& targets, int workers) {
          const auto pts = points_from(targets);
          std::vector<VelocitySample> u;
          {
            py::gil_scoped_release release;
            u = velocity_field(k, p, pts, p.blob, {workers, 1.0});
          }
          return velocity_array(u);
        },
        py::arg("kernel"), py::arg("particles"), py::arg("targets"), py::arg("workers") = 1,
        "(n, 2) array of (u^r, u^z) at (n, 2) targets (r, z).");

  m.def("feng_sverak_product", &feng_sverak_product, py::arg("particles"));
  m.def("feng_sverak_ratio",
        [](const KernelEvaluator& k, const ParticleSet& p) { return feng_sverak_ratio(k, p); },
        py::arg("kernel"), py::arg("particles"));
  m.def("weighted_L1", &weighted_L1, py::arg("particles"), py::arg("k"));

  m.def("simulate",
        [](const std::string& config_text, int workers) {
          const SimulationConfig cfg = parse_config_text(config_text);
          RunOptions o;
          o.workers = workers;
          RunResult r;
          {
            py::gil_scoped_release release;
            r = run(cfg, o);
          }
          py::list records;
          for (const auto& rec : r.records) records.append(record_dict(rec));
          py::dict out;
          out["records"] = records;
          out["aborted"] = r.aborted;
          out["abort_reason"] = r.abort_reason;
          out["csv"] = format_series_csv(r.records);
          return out;
        },
        py::arg("config_text"), py::arg("workers") = 1,
        "Run from flat key = value config text; returns records and the CSV text.");

  m.def("verify_kernel_json", [](int d) { return verify_kernel_report(Dimension(d)).dump(); },
        py::arg("d"));
  m.def("verify_estimates_json",
        [](int d, std::size_t sweep) { return verify_estimates_report(Dimension(d), sweep).dump(); },
        py::arg("d"), py::arg("sweep") = 20);
}
