#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "siegel/error.hpp"
#include "siegel/hyperell.hpp"
#include "siegel/lattice.hpp"
#include "siegel/picard.hpp"
#include "siegel/sampling.hpp"
#include "siegel/schottky.hpp"
#include "siegel/theta.hpp"

namespace py = pybind11;
using namespace siegel;

namespace {

lattice::EvenSymMatrix target_from(const std::vector<std::vector<Int>>& rows) {
    const int n = static_cast<int>(rows.size());
    IntMatrix m(n, n);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(rows[i].size()) != n) throw ValidationError("target must be square");
        for (int j = 0; j < n; ++j) m(i, j) = rows[i][j];
    }
    return lattice::EvenSymMatrix(std::move(m));
}

lattice::DnPlusLattice lattice_named(const std::string& name) {
    if (name == "E8") return lattice::DnPlusLattice::e8();
    if (name == "E8+E8") return lattice::DnPlusLattice::e8_e8();
    if (name == "D16+") return lattice::DnPlusLattice::d16_plus();
    throw ValidationError("unknown lattice '" + name + "' (expected E8, E8+E8 or D16+)");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Genus-4 Schottky form: lattice and theta constructions";

    auto base = py::register_exception<Error>(m, "Error");
    auto validation = py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
    auto resource = py::register_exception<ResourceLimitError>(m, "ResourceLimitError", base.ptr());
    py::register_exception<CutoffInfeasibleError>(m, "CutoffInfeasibleError", resource.ptr());
    py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());
    py::register_exception<DomainError>(m, "DomainError", validation.ptr());
    py::register_exception<DegenerateError>(m, "DegenerateError", validation.ptr());

    py::class_<SiegelPoint>(m, "SiegelPoint")
        .def(py::init<const Eigen::MatrixXcd&>(), py::arg("tau"))
        .def_static("scaled_identity", &SiegelPoint::scaled_identity, py::arg("g"), py::arg("t"))
        .def_static("block_diagonal", &SiegelPoint::block_diagonal)
        .def_property_readonly("genus", &SiegelPoint::genus)
        .def_property_readonly("matrix", &SiegelPoint::matrix)
        .def_property_readonly("min_imag_eigenvalue", &SiegelPoint::min_imag_eigenvalue)
        .def("__repr__", [](const SiegelPoint& p) { return "<SiegelPoint genus " + std::to_string(p.genus()) + ">"; });

    m.def(
        "sample_points",
        [](int g, int count, std::uint64_t seed) { return sampling::PointSampler(seed).points(g, count); },
        py::arg("g"), py::arg("count"), py::arg("seed"));

    m.def(
        "representation_count",
        [](const std::string& lat, const std::vector<std::vector<Int>>& t) { return lattice_named(lat).count(target_from(t)); },
        py::arg("lattice"), py::arg("target"), "N(L, T) for L one of 'E8', 'E8+E8', 'D16+'.");
    m.def(
        "short_vector_counts",
        [](const std::string& lat, Int max_norm) {
            const auto table = lattice::short_vectors(lattice_named(lat).gram(), max_norm);
            std::map<Int, std::size_t> out;
            for (Int n : table.norms()) out[n] = table.count(n);
            return out;
        },
        py::arg("lattice"), py::arg("max_norm"));

    m.def(
        "even_characteristics",
        [](int h) {
            std::vector<std::string> out;
            for (const auto& c : theta::even_characteristics(h)) out.push_back(c.to_string());
            return out;
        },
        py::arg("h"));
    m.def(
        "theta_constant",
        [](const std::string& c, const SiegelPoint& tau, double tol) {
            return theta::theta_constant(theta::Characteristic::parse(c), tau, tol);
        },
        py::arg("char"), py::arg("tau"), py::arg("tol") = 1e-10);
    m.def(
        "theta_function",
        [](const std::string& c, const SiegelPoint& tau, const Eigen::VectorXcd& z, double tol) {
            return theta::theta_function(theta::Characteristic::parse(c), tau, z, tol);
        },
        py::arg("char"), py::arg("tau"), py::arg("z"), py::arg("tol") = 1e-10);

    m.def("F_lattice", &schottky::F_lattice, py::arg("tau"), py::arg("tol") = 1e-3);
    m.def("F_theta", &schottky::F_theta, py::arg("tau"), py::arg("tol") = 1e-28);
    m.def("schottky_indicator", &schottky::schottky_indicator, py::arg("tau"), py::arg("tol") = 1e-3);
    m.def(
        "relation_residual", [](const SiegelPoint& tau, double tol) { return schottky::relation_terms(tau, tol).residual(); },
        py::arg("tau"), py::arg("tol") = 1e-10);
    m.def(
        "proportionality",
        [](const std::vector<SiegelPoint>& pts, double tol) {
            const auto fit = schottky::proportionality(pts, tol);
            return py::make_tuple(fit.constant, fit.max_rel_deviation);
        },
        py::arg("points"), py::arg("tol") = 1e-3);

    m.def(
        "jacobian_point",
        [](const std::vector<double>& branch, int quad_order) {
            return hyperell::jacobian_point(hyperell::validate_curve(branch), quad_order);
        },
        py::arg("branch"), py::arg("quad_order") = 256);

    m.def(
        "class_of_schottky", [](const std::string& s) { return picard::class_of_schottky(picard::parse_space(s)).to_string(); },
        py::arg("space"));
    m.def(
        "divisor_of_F", [](const std::string& s) { return picard::divisor_of_F(picard::parse_space(s)).to_string(); },
        py::arg("space"));
}
