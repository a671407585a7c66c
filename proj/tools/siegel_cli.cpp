#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "siegel/error.hpp"
#include "siegel/hyperell.hpp"
#include "siegel/io.hpp"
#include "siegel/lattice.hpp"
#include "siegel/picard.hpp"
#include "siegel/sampling.hpp"
#include "siegel/schottky.hpp"
#include "siegel/theta.hpp"

using namespace siegel;
using nlohmann::json;

namespace {

enum class Format { json, csv, text };

struct RunConfig {
    double tol = 0;  // 0: the subcommand's default
    Int max_diag = 0;
    int quad_order = 256;
    std::uint64_t seed = 1;
    Format format = Format::json;
    std::string out;

    double tol_or(double fallback) const { return tol > 0 ? tol : fallback; }
};

// Tolerance for F_lattice, an absolute bound on the discarded series tail.
constexpr double kSeriesTol = 1e-3;
constexpr double kThetaTol = 1e-10;

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

std::string sci6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6e", v);
    return buf;
}

class Output {
public:
    explicit Output(const RunConfig& cfg) : cfg_(cfg) {}

    void emit(const json& j) { write(j.dump(2) + "\n"); }

    void write(const std::string& s) {
        if (cfg_.out.empty()) {
            std::cout << s;
            return;
        }
        std::ofstream f(cfg_.out, std::ios::binary);
        if (!f) throw ValidationError("cannot write " + cfg_.out);
        f << s;
    }

    // Emits text for Format::text, JSON otherwise.
    void emit(const json& j, const std::string& text) {
        if (cfg_.format == Format::text)
            write(text);
        else
            emit(j);
    }

private:
    const RunConfig& cfg_;
};

SiegelPoint point_arg(const std::string& file, int genus, const RunConfig& cfg) {
    if (!file.empty()) return io::point_from_json(io::read_json_file(file));
    return sampling::PointSampler(cfg.seed).point(genus);
}

void check_config(const RunConfig& cfg) {
    if (cfg.tol != 0 && !(cfg.tol >= 1e-14 && cfg.tol <= 1e-2)) throw ValidationError("--tol must lie in [1e-14, 1e-2]");
    if (cfg.max_diag < 0 || cfg.max_diag % 2 != 0) throw ValidationError("--max-diag must be even and non-negative");
}

// ---------------------------------------------------------------------------

void lattice_coeffs(const RunConfig& cfg, int genus, Int trace_free, Int max_trace, bool classes) {
    const Int max_diag = cfg.max_diag > 0 ? cfg.max_diag : (genus <= 2 ? 8 : genus == 3 ? 6 : 4);
    lattice::TargetRegion region = lattice::TargetRegion::box(max_diag);
    if (trace_free > 0) region = {max_diag, trace_free, max_trace};
    region.validate();
    if (genus < 1 || genus > 4) throw ValidationError("--genus must be 1..4");
    const auto table = classes ? lattice::coefficient_classes(genus, region) : lattice::coefficient_table(genus, region);
    Output out(cfg);
    switch (cfg.format) {
        case Format::csv: out.write(lattice::to_csv(table)); break;
        case Format::text: out.write(lattice::to_text(table)); break;
        case Format::json: {
            json rows = json::array();
            std::size_t nonzero = 0;
            for (const auto& r : table.rows) {
                rows.push_back({{"T", r.target.flattened()}, {"n_e8e8", r.n_e8e8}, {"n_d16", r.n_d16}, {"difference", r.difference()}});
                if (r.difference() != 0) ++nonzero;
            }
            out.emit({{"genus", genus}, {"region", region.describe()}, {"rows", rows.size()}, {"nonzero", nonzero}, {"table", rows}});
        }
    }
}

void lattice_witness(const RunConfig& cfg) {
    const Int max_diag = cfg.max_diag > 0 ? cfg.max_diag : 4;
    const lattice::EvenSymMatrix d4{{2, -1, 0, 0}, {-1, 2, -1, -1}, {0, -1, 2, 0}, {0, -1, 0, 2}};
    const auto a = lattice::DnPlusLattice::e8_e8(), b = lattice::DnPlusLattice::d16_plus();
    auto targets = lattice::enumerate_targets(4, max_diag);
    std::stable_sort(targets.begin(), targets.end(), [](const auto& x, const auto& y) { return x.trace() < y.trace(); });
    // D4 is tried first, then rank-4 targets by increasing trace.
    targets.insert(targets.begin(), d4);
    json checked = json::array();
    for (const auto& t : targets) {
        if (t.rank() < 4) continue;
        const auto na = a.count(t), nb = b.count(t);
        if (na == nb) continue;
        json j = {{"T", t.entries().to_string()}, {"trace", t.trace()}, {"n_e8e8", na}, {"n_d16", nb},
                  {"difference", std::int64_t(na) - std::int64_t(nb)}, {"is_d4", t == d4}};
        Output(cfg).emit(j, "witness " + t.entries().to_string() + " trace " + std::to_string(t.trace()) + " c(T) = " +
                                std::to_string(std::int64_t(na) - std::int64_t(nb)) + "\n");
        return;
    }
    throw ValidationError("no rank-4 target with max diagonal " + std::to_string(max_diag) + " separates the lattices");
}

void theta_eval(const RunConfig& cfg, const std::string& tau_file, const std::string& chr, int genus) {
    const SiegelPoint tau = point_arg(tau_file, genus, cfg);
    const double tol = cfg.tol_or(kThetaTol);
    std::vector<theta::Characteristic> cs;
    if (chr.empty())
        cs = theta::even_characteristics(tau.genus());
    else
        cs.push_back(theta::Characteristic::parse(chr));
    const auto values = theta::theta_constants(cs, tau, tol);
    json rows = json::array();
    std::ostringstream text;
    for (std::size_t k = 0; k < cs.size(); ++k) {
        rows.push_back({{"char", cs[k].to_string()}, {"value", complex_json(values[k])}});
        text << cs[k].to_string() << ' ' << sci6(values[k].real()) << ' ' << sci6(values[k].imag()) << '\n';
    }
    Output(cfg).emit({{"tau", io::point_to_json(tau)}, {"tol", tol}, {"theta", rows}}, text.str());
}

json schottky_report(const SiegelPoint& tau, double tol) {
    const auto series = schottky::F_lattice_series(tau, tol);
    const Complex ft = schottky::F_theta(tau);
    return {{"tau", io::point_to_json(tau)},
            {"F_lattice", complex_json(series.value)},
            {"F_theta", complex_json(ft)},
            {"indicator", series.magnitude > 0 ? std::abs(series.value) / series.magnitude : 0.0},
            {"cutoff", schottky::default_coefficients().region.describe()},
            {"tail", series.tail},
            {"tol", tol}};
}

void schottky_eval(const RunConfig& cfg, const std::string& tau_file) {
    const SiegelPoint tau = point_arg(tau_file, 4, cfg);
    const json r = schottky_report(tau, cfg.tol_or(kSeriesTol));
    Output(cfg).emit(r, "F_lattice " + sci6(r["F_lattice"][0]) + " " + sci6(r["F_lattice"][1]) + "\nF_theta " +
                            sci6(r["F_theta"][0]) + " " + sci6(r["F_theta"][1]) + "\nindicator " + sci6(r["indicator"]) + "\n");
}

void schottky_relation(const RunConfig& cfg, int points) {
    const double tol = cfg.tol_or(kThetaTol);
    double worst = 0;
    json rows = json::array();
    for (const auto& tau : sampling::PointSampler(cfg.seed).points(3, points)) {
        const double r = schottky::relation_terms(tau, tol).residual();
        worst = std::max(worst, r);
        rows.push_back(r);
    }
    Output(cfg).emit({{"points", points}, {"seed", cfg.seed}, {"tol", tol}, {"residuals", rows}, {"max_residual", worst}},
                     "max residual " + sci6(worst) + " over " + std::to_string(points) + " points\n");
}

void schottky_proportionality(const RunConfig& cfg, int points) {
    const double tol = cfg.tol_or(kSeriesTol);
    const auto fit = schottky::proportionality(sampling::PointSampler(cfg.seed).points(4, points), tol);
    Output(cfg).emit({{"points", points},
                      {"seed", cfg.seed},
                      {"tol", tol},
                      {"points_used", fit.points_used},
                      {"constant", complex_json(fit.constant)},
                      {"max_rel_deviation", fit.max_rel_deviation}},
                     "constant " + sci6(fit.constant.real()) + " " + sci6(fit.constant.imag()) + "\nmax deviation " +
                         sci6(fit.max_rel_deviation) + "\n");
}

void jacobian_test(const RunConfig& cfg, const std::string& curve_file, const std::vector<double>& branch) {
    const auto curve = curve_file.empty() ? hyperell::validate_curve(branch) : io::curve_from_json(io::read_json_file(curve_file));
    const auto p = hyperell::periods(curve, cfg.quad_order);
    const SiegelPoint tau = hyperell::jacobian_point(curve, cfg.quad_order);
    json j = {{"curve", io::curve_to_json(curve)},
              {"genus", curve.genus()},
              {"quad_order", p.quad_order},
              {"drift", p.drift},
              {"tau", io::point_to_json(tau)},
              {"min_imag_eigenvalue", tau.min_imag_eigenvalue()}};
    std::string text = "genus " + std::to_string(curve.genus()) + " drift " + sci6(p.drift) + "\n";
    if (curve.genus() == 4) {
        const double tol = cfg.tol_or(kSeriesTol);
        const double ind = schottky::schottky_indicator(tau, tol);
        j["indicator"] = ind;
        j["tol"] = tol;
        text += "indicator " + sci6(ind) + "\n";
    }
    Output(cfg).emit(j, text);
}

void picard_show(const RunConfig& cfg, const std::string& space_name) {
    const auto s = picard::parse_space(space_name);
    const auto j = picard::class_of_schottky(s), f = picard::divisor_of_F(s);
    Output(cfg).emit({{"space", space_name}, {"J", j.to_string()}, {"div_F", f.to_string()},
                      {"div_F_is_8L", f == 8 * picard::DivisorClass::L(s)}},
                     "J = " + j.to_string() + "\ndiv F = " + f.to_string() + "\n");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Schottky form in genus 4: lattice and theta constructions, Jacobian tests, divisor classes"};
    app.require_subcommand(1);
    app.fallthrough();
    RunConfig cfg;
    const std::map<std::string, Format> formats{{"json", Format::json}, {"csv", Format::csv}, {"text", Format::text}};
    app.add_option("--tol", cfg.tol, "Absolute tolerance in [1e-14, 1e-2]");
    app.add_option("--max-diag", cfg.max_diag, "Largest diagonal entry of the Fourier indices");
    app.add_option("--quad-order", cfg.quad_order, "Quadrature order for periods");
    app.add_option("--seed", cfg.seed, "Seed for sampled points");
    app.add_option("--format", cfg.format, "json, csv or text")->transform(CLI::CheckedTransformer(formats));
    app.add_option("--out", cfg.out, "Write to this file instead of stdout");

    std::function<void()> action;

    auto* lat = app.add_subcommand("lattice", "Representation numbers of E8+E8 and D16+");
    lat->require_subcommand(1);
    auto* coeffs = lat->add_subcommand("coeffs", "Coefficient table over a region of targets");
    int genus = 2;
    Int trace_free = 0, max_trace = 0;
    bool classes = false;
    coeffs->add_option("--genus", genus, "Size of the targets (1..4)");
    coeffs->add_option("--trace-free-diag", trace_free, "Cap the trace of targets with a larger diagonal entry");
    coeffs->add_option("--max-trace", max_trace, "Trace cap used with --trace-free-diag");
    coeffs->add_flag("--classes", classes, "One row per reduced class instead of per target");
    coeffs->callback([&] { action = [&] { lattice_coeffs(cfg, genus, trace_free, max_trace, classes); }; });
    auto* witness = lat->add_subcommand("witness", "Rank-4 target separating the two lattices");
    witness->callback([&] { action = [&] { lattice_witness(cfg); }; });

    std::string tau_file, chr;
    auto* th = app.add_subcommand("theta", "Theta constants");
    th->require_subcommand(1);
    auto* th_eval = th->add_subcommand("eval", "Theta constants at a point");
    th_eval->add_option("--tau", tau_file, "Point file {g, re, im}; a seeded point otherwise");
    th_eval->add_option("--char", chr, "Characteristic eps/eps'; all even ones otherwise");
    th_eval->add_option("--genus", genus, "Genus of the seeded point");
    th_eval->callback([&] { action = [&] { theta_eval(cfg, tau_file, chr, genus); }; });

    auto* sch = app.add_subcommand("schottky", "The genus-4 Schottky form");
    sch->require_subcommand(1);
    int points = 10;
    auto* s_eval = sch->add_subcommand("eval", "F_lattice, F_theta and the vanishing indicator at a point");
    s_eval->add_option("--tau", tau_file, "Point file; a seeded point otherwise");
    s_eval->callback([&] { action = [&] { schottky_eval(cfg, tau_file); }; });
    auto* s_rel = sch->add_subcommand("relation", "Residual of the genus-3 relation at seeded points");
    s_rel->add_option("--points", points, "Number of points")->check(CLI::PositiveNumber);
    s_rel->callback([&] { action = [&] { schottky_relation(cfg, points); }; });
    auto* s_prop = sch->add_subcommand("proportionality", "Constant between the two constructions");
    s_prop->add_option("--points", points, "Number of points")->check(CLI::PositiveNumber);
    s_prop->callback([&] { action = [&] { schottky_proportionality(cfg, points); }; });

    std::string curve_file;
    std::vector<double> branch;
    auto* jac = app.add_subcommand("jacobian", "Period matrices of hyperelliptic curves");
    jac->require_subcommand(1);
    auto* j_test = jac->add_subcommand("test", "Period matrix and, in genus 4, the vanishing indicator");
    auto* cf = j_test->add_option("--curve", curve_file, "Curve file {branch: [...]}");
    auto* br = j_test->add_option("--branch", branch, "Branch points")->delimiter(',');
    cf->excludes(br);
    j_test->callback([&] {
        if (curve_file.empty() && branch.empty()) throw CLI::ValidationError("--curve or --branch is required");
        action = [&] { jacobian_test(cfg, curve_file, branch); };
    });

    std::string space = "igusa";
    auto* pic = app.add_subcommand("picard", "Class of the Jacobian locus and divisor of F");
    pic->add_option("--space", space, "partial, igusa or voronoi");
    pic->callback([&] { action = [&] { picard_show(cfg, space); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e);
        return 0;
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        check_config(cfg);
        action();
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ResourceLimitError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const ConvergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
