#include "relctrl/spec_io.hpp"

#include "relctrl/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace relctrl {

using nlohmann::json;

namespace {

Scalar scalar_from_json(const json& v, const std::string& where) {
    if (v.is_number_integer()) return Scalar(static_cast<long>(v.get<std::int64_t>()));
    if (v.is_string()) {
        try {
            return Scalar::parse(v.get<std::string>());
        } catch (const SpecParseError& e) {
            throw SpecParseError(where + ": " + e.what());
        }
    }
    if (v.is_number_float()) {
        if (arithmetic_mode() != ArithmeticMode::Float) {
            throw SpecParseError(where + ": decimal literals need arithmetic=\"float\"");
        }
        return Scalar::from_double(v.get<double>());
    }
    throw SpecParseError(where + ": expected an integer or a rational string");
}

Matrix matrix_from_json(const json& v, const std::string& where) {
    if (!v.is_array() || v.empty()) throw SpecParseError(where + ": expected a non-empty array of rows");
    std::size_t cols = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_array() || v[i].empty()) {
            throw SpecParseError(where + "[" + std::to_string(i) + "]: expected a non-empty row");
        }
        if (i == 0) {
            cols = v[i].size();
        } else if (v[i].size() != cols) {
            throw SpecParseError(where + "[" + std::to_string(i) + "]: ragged row");
        }
    }
    Matrix m(v.size(), cols);
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = 0; j < cols; ++j) {
            m.at(i, j) = scalar_from_json(
                v[i][j], where + "[" + std::to_string(i) + "][" + std::to_string(j) + "]");
        }
    return m;
}

Matrix vector_from_json(const json& v, const std::string& where) {
    if (!v.is_array() || v.empty()) throw SpecParseError(where + ": expected a non-empty array");
    Matrix m(v.size(), 1);
    for (std::size_t i = 0; i < v.size(); ++i) {
        m.at(i, 0) = scalar_from_json(v[i], where + "[" + std::to_string(i) + "]");
    }
    return m;
}

json scalar_to_json(const Scalar& s) {
    if (s.is_rational()) {
        if (s.fits_int64()) return json(s.to_int64());
        return json(s.to_string());
    }
    if (s.is_integer() && s.fits_int64()) return json(s.to_int64());
    return json(s.to_double());
}

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(scalar_to_json(m.at(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

json vector_to_json(const Matrix& m) {
    json out = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) out.push_back(scalar_to_json(m.at(i, 0)));
    return out;
}

json matrix_to_string_json(const Matrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m.at(i, j).to_string());
        rows.push_back(std::move(row));
    }
    return rows;
}

json vector_to_string_json(const Matrix& m) {
    json out = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) out.push_back(m.at(i, 0).to_string());
    return out;
}

} // namespace

bool SystemSpec::operator==(const SystemSpec& rhs) const {
    return mode == rhs.mode && a == rhs.a && b == rhs.b && c == rhs.c && p == rhs.p &&
           history == rhs.history && target == rhs.target && control == rhs.control;
}

SystemSpec spec_from_json(const json& doc, bool force_float) {
    if (!doc.is_object()) throw SpecParseError("spec: top level must be an object");

    ArithmeticMode mode = ArithmeticMode::Rational;
    if (doc.contains("arithmetic")) {
        const json& a = doc.at("arithmetic");
        if (!a.is_string() || (a != "rational" && a != "float")) {
            throw SpecParseError("spec.arithmetic: must be \"rational\" or \"float\"");
        }
        if (a == "float") mode = ArithmeticMode::Float;
    }
    if (force_float) mode = ArithmeticMode::Float;
    set_arithmetic_mode(mode);

    for (const char* field : {"A", "B", "C", "p", "history"}) {
        if (!doc.contains(field)) throw SpecParseError(std::string("spec.") + field + ": missing");
    }
    if (!doc.at("p").is_number_integer()) throw SpecParseError("spec.p: expected an integer");
    const long p = doc.at("p").get<long>();
    if (p < 1) throw SpecParseError("spec.p: delay must be >= 1");

    SystemSpec spec{.mode = mode,
                    .a = matrix_from_json(doc.at("A"), "spec.A"),
                    .b = matrix_from_json(doc.at("B"), "spec.B"),
                    .c = matrix_from_json(doc.at("C"), "spec.C"),
                    .p = static_cast<int>(p),
                    .history = {},
                    .target = {},
                    .control = {}};

    const std::size_t d = spec.a.rows();
    if (!spec.a.is_square()) throw SpecParseError("spec.A: must be square");
    if (spec.b.rows() != d || spec.b.cols() != d) {
        throw SpecParseError("spec.B: must be " + std::to_string(d) + "x" + std::to_string(d));
    }
    if (spec.c.rows() != d) throw SpecParseError("spec.C: must have " + std::to_string(d) + " rows");
    const std::size_t k = spec.c.cols();

    const json& hist = doc.at("history");
    if (!hist.is_object()) throw SpecParseError("spec.history: expected an object keyed by step");
    if (hist.size() != static_cast<std::size_t>(p) + 1) {
        throw SpecParseError("spec.history: must cover exactly the steps -p..0");
    }
    for (long r = -p; r <= 0; ++r) {
        const std::string key = std::to_string(r);
        if (!hist.contains(key)) throw SpecParseError("spec.history: missing step \"" + key + "\"");
        Matrix v = vector_from_json(hist.at(key), "spec.history[\"" + key + "\"]");
        if (v.rows() != d) {
            throw SpecParseError("spec.history[\"" + key + "\"]: expected " + std::to_string(d) +
                                 " components");
        }
        spec.history.push_back(std::move(v));
    }

    if (doc.contains("target")) {
        const json& t = doc.at("target");
        if (!t.is_object() || !t.contains("r1") || !t.contains("y")) {
            throw SpecParseError("spec.target: expected {\"r1\": ..., \"y\": [...]}");
        }
        if (!t.at("r1").is_number_integer() || t.at("r1").get<long>() < 1) {
            throw SpecParseError("spec.target.r1: expected an integer >= 1");
        }
        Matrix y = vector_from_json(t.at("y"), "spec.target.y");
        if (y.rows() != d) throw SpecParseError("spec.target.y: expected " + std::to_string(d) + " components");
        spec.target = TargetSpec{.r1 = t.at("r1").get<long>(), .y = std::move(y)};
    }

    if (doc.contains("control")) {
        const json& ctl = doc.at("control");
        if (!ctl.is_array() || ctl.empty()) {
            throw SpecParseError("spec.control: expected a non-empty array of input vectors");
        }
        ControlSequence u;
        for (std::size_t r = 0; r < ctl.size(); ++r) {
            Matrix v = vector_from_json(ctl[r], "spec.control[" + std::to_string(r) + "]");
            if (v.rows() != k) {
                throw SpecParseError("spec.control[" + std::to_string(r) + "]: expected " +
                                     std::to_string(k) + " components");
            }
            u.push_back(std::move(v));
        }
        spec.control = std::move(u);
    }
    return spec;
}

SystemSpec load_spec(const std::filesystem::path& path, bool force_float) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open spec file: " + path.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw SpecParseError("spec JSON parse error: " + std::string(e.what()));
    }
    return spec_from_json(doc, force_float);
}

json spec_to_json(const SystemSpec& spec) {
    json doc;
    doc["arithmetic"] = spec.mode == ArithmeticMode::Float ? "float" : "rational";
    doc["p"] = spec.p;
    doc["A"] = matrix_to_json(spec.a);
    doc["B"] = matrix_to_json(spec.b);
    doc["C"] = matrix_to_json(spec.c);
    json hist;
    for (long r = -spec.p; r <= 0; ++r) {
        hist[std::to_string(r)] = vector_to_json(spec.history[static_cast<std::size_t>(r + spec.p)]);
    }
    doc["history"] = std::move(hist);
    if (spec.target) {
        doc["target"] = json{{"r1", spec.target->r1}, {"y", vector_to_json(spec.target->y)}};
    }
    if (spec.control) {
        json ctl = json::array();
        for (const Matrix& u : *spec.control) ctl.push_back(vector_to_json(u));
        doc["control"] = std::move(ctl);
    }
    return doc;
}

json report_to_json(const ControllabilityReport& report, const std::optional<Gramian>& gram) {
    json doc;
    doc["d"] = report.d;
    doc["k"] = report.k;
    doc["p"] = report.p;
    doc["rank"] = report.rank_s;
    doc["r_star"] = report.r_star;
    doc["S_rows"] = report.s.rows();
    doc["S_cols"] = report.s.cols();
    doc["S"] = matrix_to_string_json(report.s);
    doc["verdict"] = report.controllable ? "controllable" : "uncontrollable";
    doc["reason"] = report.reason;
    if (report.queried_r1) {
        doc["horizon"] = json{{"r1", *report.queried_r1}, {"ok", report.horizon_ok}};
    }
    if (gram) {
        doc["gramian"] = json{{"r1", gram->r1},
                              {"entries", matrix_to_string_json(gram->g)},
                              {"positive_definite", gram->positive_definite}};
    }
    return doc;
}

std::string report_to_text(const ControllabilityReport& report, const std::optional<Gramian>& gram) {
    std::ostringstream out;
    out << "system: d=" << report.d << " k=" << report.k << " p=" << report.p << "\n";
    out << "kalman matrix S: " << report.s.rows() << "x" << report.s.cols() << "\n";
    out << "rank(S) = " << report.rank_s << (report.rank_ok ? " (full)" : " (deficient)") << "\n";
    out << "minimal horizon r* = " << report.r_star << "\n";
    if (report.queried_r1) {
        out << "queried horizon r1 = " << *report.queried_r1 << " ("
            << (report.horizon_ok ? "ok" : "below r*") << ")\n";
    }
    if (gram) {
        out << "gramian(r1=" << gram->r1 << ") = " << gram->g.to_string()
            << (gram->positive_definite ? " (positive definite)" : " (singular)") << "\n";
    }
    out << "verdict: " << (report.controllable ? "controllable" : "uncontrollable");
    if (!report.reason.empty()) out << " (reason: " << report.reason << ")";
    out << "\n";
    return out.str();
}

json plan_to_json(const SteeringPlan& plan, bool verified) {
    json doc;
    doc["r1"] = plan.r1;
    doc["eta"] = vector_to_string_json(plan.eta);
    doc["gramian"] = json{{"entries", matrix_to_string_json(plan.gram.g)},
                          {"positive_definite", plan.gram.positive_definite}};
    json ctl = json::array();
    for (const Matrix& u : plan.control) ctl.push_back(vector_to_string_json(u));
    doc["control"] = std::move(ctl);
    doc["achieved_state"] = vector_to_string_json(plan.achieved_state);
    doc["residual"] = plan.residual.to_string();
    doc["verified"] = verified;
    return doc;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj, const ControlSequence& u) {
    const int p = traj.delay();
    const long r1 = traj.horizon();
    const std::size_t d = traj.state(0).rows();
    const std::size_t k = u.empty() ? 0 : u.front().rows();
    out << "r";
    for (std::size_t i = 1; i <= d; ++i) out << ",y_" << i;
    for (std::size_t i = 1; i <= k; ++i) out << ",u_" << i;
    out << "\n";
    for (long r = -p; r <= r1; ++r) {
        out << r;
        const Matrix& y = traj.state(r);
        for (std::size_t i = 0; i < d; ++i) out << "," << y.at(i, 0).to_string();
        const bool has_u = r >= 0 && r < r1;
        for (std::size_t i = 0; i < k; ++i) {
            out << ",";
            if (has_u) out << u[static_cast<std::size_t>(r)].at(i, 0).to_string();
        }
        out << "\n";
    }
}

std::pair<Trajectory, ControlSequence> read_trajectory_csv(std::istream& in, int p, std::size_t d,
                                                           std::size_t k) {
    std::string line;
    if (!std::getline(in, line)) throw SpecParseError("trajectory CSV: missing header");
    std::vector<Matrix> states;
    ControlSequence u;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ',')) fields.push_back(f);
        while (fields.size() < 1 + d + k) fields.push_back(""); // trailing blanks
        if (fields.size() != 1 + d + k) throw SpecParseError("trajectory CSV: bad column count");
        const long r = std::stol(fields[0]);
        Matrix y(d, 1);
        for (std::size_t i = 0; i < d; ++i) y.at(i, 0) = Scalar::parse(fields[1 + i]);
        states.push_back(std::move(y));
        if (!fields[1 + d].empty()) {
            Matrix uc(k, 1);
            for (std::size_t i = 0; i < k; ++i) uc.at(i, 0) = Scalar::parse(fields[1 + d + i]);
            if (r != static_cast<long>(u.size())) throw SpecParseError("trajectory CSV: control rows out of order");
            u.push_back(std::move(uc));
        }
    }
    return {Trajectory(p, std::move(states)), std::move(u)};
}

void write_trajectory_svg(std::ostream& out, const Trajectory& traj) {
    const int p = traj.delay();
    const long r1 = traj.horizon();
    const std::size_t d = traj.state(0).rows();
    const double width = 800, height = 520, margin = 48;

    double lo = 0.0, hi = 0.0;
    for (long r = -p; r <= r1; ++r) {
        for (std::size_t i = 0; i < d; ++i) {
            double v = traj.state(r).at(i, 0).to_double();
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    if (hi - lo < 1e-12) hi = lo + 1.0;

    auto px = [&](long r) { return margin + (width - 2 * margin) * (double(r + p) / double(r1 + p)); };
    auto py = [&](double v) { return height - margin - (height - 2 * margin) * ((v - lo) / (hi - lo)); };
    char buf[64];
    auto fmt = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.2f", v);
        return std::string(buf);
    };

    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width
        << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    // axis line at v = 0 when visible
    if (lo <= 0.0 && 0.0 <= hi) {
        out << "<line x1=\"" << fmt(px(-p)) << "\" y1=\"" << fmt(py(0)) << "\" x2=\"" << fmt(px(r1))
            << "\" y2=\"" << fmt(py(0)) << "\" stroke=\"#cccccc\" stroke-width=\"1\"/>\n";
    }
    for (std::size_t i = 0; i < d; ++i) {
        out << "<polyline fill=\"none\" stroke=\"" << palette[i % 8] << "\" stroke-width=\"2\" points=\"";
        for (long r = -p; r <= r1; ++r) {
            if (r > -p) out << " ";
            out << fmt(px(r)) << "," << fmt(py(traj.state(r).at(i, 0).to_double()));
        }
        out << "\"/>\n";
    }
    for (std::size_t i = 0; i < d; ++i) {
        for (long r = -p; r <= 0; ++r) { // history markers
            out << "<circle cx=\"" << fmt(px(r)) << "\" cy=\""
                << fmt(py(traj.state(r).at(i, 0).to_double())) << "\" r=\"3\" fill=\"#1f77b4\"/>\n";
        }
        out << "<circle cx=\"" << fmt(px(r1)) << "\" cy=\""
            << fmt(py(traj.state(r1).at(i, 0).to_double())) << "\" r=\"4\" fill=\"#d62728\"/>\n";
    }
    out << "</svg>\n";
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << content;
    if (!out) throw IoError("write failed: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace relctrl
