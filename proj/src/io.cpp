#include "siegel/io.hpp"

#include <fstream>

#include "siegel/error.hpp"

namespace siegel::io {

namespace {

Eigen::MatrixXd read_matrix(const nlohmann::json& j, int g, const char* name) {
    if (!j.is_array()) throw ValidationError(std::string("'") + name + "' must be an array");
    Eigen::MatrixXd m(g, g);
    const bool nested = !j.empty() && j[0].is_array();
    if (nested) {
        if (static_cast<int>(j.size()) != g) throw ValidationError(std::string("'") + name + "' needs g rows");
        for (int r = 0; r < g; ++r) {
            if (!j[r].is_array() || static_cast<int>(j[r].size()) != g)
                throw ValidationError(std::string("'") + name + "' has a row of the wrong length");
            for (int c = 0; c < g; ++c) {
                if (!j[r][c].is_number()) throw ValidationError(std::string("'") + name + "' entries must be numbers");
                m(r, c) = j[r][c].get<double>();
            }
        }
        return m;
    }
    if (static_cast<int>(j.size()) != g * g) throw ValidationError(std::string("'") + name + "' needs g*g entries");
    for (int k = 0; k < g * g; ++k) {
        if (!j[k].is_number()) throw ValidationError(std::string("'") + name + "' entries must be numbers");
        m(k / g, k % g) = j[k].get<double>();
    }
    return m;
}

}  // namespace

nlohmann::json point_to_json(const SiegelPoint& tau) {
    const int g = tau.genus();
    nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
    for (int r = 0; r < g; ++r)
        for (int c = 0; c < g; ++c) {
            re.push_back(tau(r, c).real());
            im.push_back(tau(r, c).imag());
        }
    return {{"g", g}, {"re", re}, {"im", im}};
}

SiegelPoint point_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("g") || !j.contains("re") || !j.contains("im"))
        throw ValidationError("a point needs the fields g, re and im");
    if (!j["g"].is_number_integer()) throw ValidationError("'g' must be an integer");
    const int g = j["g"].get<int>();
    if (g < 1 || g > 8) throw ValidationError("'g' must be between 1 and 8");
    return SiegelPoint(read_matrix(j["re"], g, "re"), read_matrix(j["im"], g, "im"));
}

nlohmann::json curve_to_json(const hyperell::HyperellipticCurve& curve) { return {{"branch", curve.branch()}}; }

hyperell::HyperellipticCurve curve_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("branch") || !j["branch"].is_array())
        throw ValidationError("a curve needs a 'branch' array");
    std::vector<double> b;
    for (const auto& v : j["branch"]) {
        if (!v.is_number()) throw ValidationError("branch points must be numbers");
        b.push_back(v.get<double>());
    }
    return hyperell::validate_curve(std::move(b));
}

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError("malformed JSON in " + path + ": " + e.what());
    }
}

}  // namespace siegel::io
