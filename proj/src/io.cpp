#include "pg4/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace pg4 {

using nlohmann::json;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path);
    out << content;
}

namespace {

std::vector<std::vector<double>> read_csv_numeric(const std::string& path, size_t min_cols) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        bool numeric = true;
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (...) {
                numeric = false;
                break;
            }
        }
        if (!numeric) {
            if (first) { // header line
                first = false;
                continue;
            }
            throw InputError(path + ": non-numeric data row");
        }
        first = false;
        if (row.size() < min_cols) throw InputError(path + ": expected >= " +
                                                    std::to_string(min_cols) + " columns");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw InputError(path + ": no data rows");
    return rows;
}

json parse_json_text(const std::string& text, const char* what) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw InputError(std::string("malformed JSON in ") + what);
    return j;
}

} // namespace

CurveSpec parse_curve_json(const std::string& text, const std::string& base_dir, long n_override,
                           double dom0, double dom1) {
    const json j = parse_json_text(text, "curve definition");
    if (!j.contains("family")) throw InputError("curve definition: missing \"family\"");
    const std::string family = j["family"].get<std::string>();

    double s0 = 0.0, s1 = 1.0;
    long n = 257;
    if (j.contains("domain")) {
        if (!j["domain"].is_array() || j["domain"].size() != 2)
            throw InputError("curve definition: \"domain\" must be [s0,s1]");
        s0 = j["domain"][0].get<double>();
        s1 = j["domain"][1].get<double>();
    }
    if (j.contains("n")) n = j["n"].get<long>();
    if (n_override > 0) n = n_override;
    if (dom1 > dom0) {
        s0 = dom0;
        s1 = dom1;
    }
    if (n < 16) throw InputError("curve definition: n must be >= 16");
    if (!(s1 > s0)) throw InputError("curve definition: empty domain");

    const json params = j.value("params", json::object());
    CurveSpec spec;
    spec.family = family;
    if (family == "helix") {
        spec.helix_a = params.value("a", 1.0);
        spec.helix_b = params.value("b", 1.0);
        spec.helix_k = params.value("k", 1.0);
        spec.curve = make_helix(spec.helix_a, spec.helix_b, spec.helix_k, s0, s1, n);
    } else if (family == "polynomial") {
        auto coeffs = [&](const char* key) {
            std::vector<double> c;
            if (params.contains(key))
                for (const auto& v : params[key]) c.push_back(v.get<double>());
            return c;
        };
        spec.curve = make_polynomial(coeffs("y"), coeffs("z"), coeffs("w"), s0, s1, n);
    } else if (family == "sampled") {
        std::vector<double> s;
        std::vector<PGVec4> pts;
        if (params.contains("rows")) {
            for (const auto& r : params["rows"]) {
                if (!r.is_array() || r.size() != 5)
                    throw InputError("sampled curve: rows must be [s,x,y,z,w]");
                s.push_back(r[0].get<double>());
                pts.push_back({r[1].get<double>(), r[2].get<double>(), r[3].get<double>(),
                               r[4].get<double>()});
            }
        } else if (params.contains("csv")) {
            std::filesystem::path p = params["csv"].get<std::string>();
            if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
            for (const auto& row : read_csv_numeric(p.string(), 5)) {
                s.push_back(row[0]);
                pts.push_back({row[1], row[2], row[3], row[4]});
            }
        } else {
            throw InputError("sampled curve: need \"rows\" or \"csv\"");
        }
        spec.curve = make_sampled(std::move(s), std::move(pts));
    } else {
        throw InputError("curve definition: unknown family \"" + family + "\"");
    }
    return spec;
}

CurveSpec load_curve_json(const std::string& path, long n_override, double dom0, double dom1) {
    return parse_curve_json(read_file(path),
                            std::filesystem::path(path).parent_path().string(), n_override, dom0,
                            dom1);
}

namespace {

FlowComponent parse_component(const json& j, const std::string& base_dir) {
    if (j.is_null()) return FlowComponent::constant(0.0);
    if (!j.is_object()) throw InputError("flow component must be an object");
    if (j.contains("const")) return FlowComponent::constant(j["const"].get<double>());
    if (j.contains("poly_s")) {
        std::vector<double> c;
        for (const auto& v : j["poly_s"]) c.push_back(v.get<double>());
        return FlowComponent::poly(std::move(c));
    }
    if (j.contains("sin")) {
        const json& s = j["sin"];
        return FlowComponent::sinusoid(s.value("amp", 0.0), s.value("freq", 1.0),
                                       s.value("phase", 0.0));
    }
    if (j.contains("table")) {
        std::filesystem::path p = j["table"].get<std::string>();
        if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
        TableComponent tc;
        for (const auto& row : read_csv_numeric(p.string(), 2)) {
            tc.s.push_back(row[0]);
            tc.value.push_back(row[1]);
        }
        return {tc};
    }
    throw InputError("flow component: need one of const|poly_s|sin|table");
}

} // namespace

FlowField parse_flow_json(const std::string& text, const std::string& base_dir) {
    const json j = parse_json_text(text, "flow definition");
    FlowField f;
    f.f1 = parse_component(j.value("f1", json()), base_dir);
    f.f2 = parse_component(j.value("f2", json()), base_dir);
    f.f3 = parse_component(j.value("f3", json()), base_dir);
    f.f4 = parse_component(j.value("f4", json()), base_dir);
    return f;
}

FlowField load_flow_json(const std::string& path) {
    return parse_flow_json(read_file(path),
                           std::filesystem::path(path).parent_path().string());
}

namespace {

void append_vec(std::string& line, const PGVec4& v) {
    line += "," + fmt17(v.x) + "," + fmt17(v.y) + "," + fmt17(v.z) + "," + fmt17(v.w);
}

} // namespace

std::string apparatus_csv(const FrenetApparatus& app) {
    std::string out;
    out += "# epsilon1=" + std::to_string(app.eps1) + " epsilon2=" + std::to_string(app.eps2) +
           " epsilon3=" + std::to_string(app.eps3) + " mu=" + std::to_string(app.mu) + "\n";
    out += "s,kappa,tau,sigma,Tx,Ty,Tz,Tw,Nx,Ny,Nz,Nw,B1x,B1y,B1z,B1w,B2x,B2y,B2z,B2w\n";
    for (long i = 0; i < app.size(); ++i) {
        const size_t k = static_cast<size_t>(i);
        std::string line = fmt17(app.s[k]) + "," + fmt17(app.kappa[k]) + "," + fmt17(app.tau[k]) +
                           "," + fmt17(app.sigma[k]);
        append_vec(line, app.t[k]);
        append_vec(line, app.n[k]);
        append_vec(line, app.b1[k]);
        append_vec(line, app.b2[k]);
        out += line + "\n";
    }
    return out;
}

namespace {

json vec_to_json(const PGVec4& v) { return json::array({v.x, v.y, v.z, v.w}); }

} // namespace

std::string apparatus_json(const FrenetApparatus& app) {
    json j;
    j["epsilon"] = {app.eps1, app.eps2, app.eps3};
    j["mu"] = app.mu;
    j["h"] = app.h;
    json rows = json::array();
    for (long i = 0; i < app.size(); ++i) {
        const size_t k = static_cast<size_t>(i);
        rows.push_back({{"s", app.s[k]},
                        {"kappa", app.kappa[k]},
                        {"tau", app.tau[k]},
                        {"sigma", app.sigma[k]},
                        {"T", vec_to_json(app.t[k])},
                        {"N", vec_to_json(app.n[k])},
                        {"B1", vec_to_json(app.b1[k])},
                        {"B2", vec_to_json(app.b2[k])}});
    }
    j["points"] = std::move(rows);
    return j.dump(2) + "\n";
}

std::string evolution_csv(const std::vector<EvolutionState>& states) {
    std::string out = "t,s,x,y,z,w,kappa,tau,sigma,arclength\n";
    for (const auto& st : states) {
        for (long i = 0; i < st.app.size(); ++i) {
            const size_t k = static_cast<size_t>(i);
            out += fmt17(st.t) + "," + fmt17(st.app.s[k]) + "," + fmt17(st.positions[k].x) + "," +
                   fmt17(st.positions[k].y) + "," + fmt17(st.positions[k].z) + "," +
                   fmt17(st.positions[k].w) + "," + fmt17(st.app.kappa[k]) + "," +
                   fmt17(st.app.tau[k]) + "," + fmt17(st.app.sigma[k]) + "," +
                   fmt17(st.arc_length) + "\n";
        }
    }
    return out;
}

std::string residual_json(const ResidualReport& report) {
    json arr = json::array();
    for (const auto& e : report) {
        json item = {{"identity", e.identity},
                     {"max_abs", e.max_abs},
                     {"mean_abs", e.mean_abs},
                     {"h", e.h},
                     {"dt", e.dt}};
        if (e.skipped > 0) item["skipped"] = e.skipped;
        arr.push_back(std::move(item));
    }
    return arr.dump(2) + "\n";
}

namespace {

json energy_to_json(const EnergyReport& r) {
    json j = {{"field", to_string(r.field)},
              {"direction", to_string(r.direction)},
              {"domain", {r.a, r.b}},
              {"value", r.value},
              {"branch_flag", false},
              {"quadrature_error", r.quadrature_error}};
    if (r.has_alt_value) j["alt_value"] = r.alt_value;
    return j;
}

json angle_to_json(const PseudoAngleReport& r) {
    return {{"field", to_string(r.field)},
            {"direction", to_string(r.direction)},
            {"domain", {r.a, r.b}},
            {"value", r.value},
            {"branch_flag", r.complex_branch},
            {"quadrature_error", r.quadrature_error}};
}

} // namespace

std::string energy_json(const std::vector<EnergyReport>& energies,
                        const std::vector<PseudoAngleReport>& angles) {
    json j;
    j["energies"] = json::array();
    for (const auto& e : energies) j["energies"].push_back(energy_to_json(e));
    j["pseudo_angles"] = json::array();
    for (const auto& a : angles) j["pseudo_angles"].push_back(angle_to_json(a));
    return j.dump(2) + "\n";
}

std::string energy_csv(const std::vector<EnergyReport>& energies,
                       const std::vector<PseudoAngleReport>& angles) {
    std::string out = "kind,field,direction,param,integrand\n";
    for (const auto& e : energies)
        for (size_t i = 0; i < e.params.size(); ++i)
            out += std::string("energy,") + to_string(e.field) + "," + to_string(e.direction) +
                   "," + fmt17(e.params[i]) + "," + fmt17(e.integrand[i]) + "\n";
    for (const auto& a : angles)
        for (size_t i = 0; i < a.params.size(); ++i)
            out += std::string("pseudo_angle,") + to_string(a.field) + "," +
                   to_string(a.direction) + "," + fmt17(a.params[i]) + "," +
                   fmt17(a.integrand[i]) + "\n";
    return out;
}

} // namespace pg4
