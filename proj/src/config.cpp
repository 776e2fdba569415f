#include "ads/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace ads {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: bad number for '" + key + "': " + v);
    }
}

long to_long(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const long x = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: bad integer for '" + key + "': " + v);
    }
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true") return true;
    if (v == "false") return false;
    throw ConfigError("config: bad boolean for '" + key + "': " + v);
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
    if (out.empty()) throw ConfigError("config: empty list for '" + key + "'");
    return out;
}

const std::map<std::string, std::set<std::string>>& schema() {
    static const std::map<std::string, std::set<std::string>> s = {
        {"group", {"kind", "T", "side", "T2", "k", "angles", "antipode"}},
        {"deform",
         {"mode", "t", "t_start", "t_step", "t_count", "rho_angles", "xi1", "xi2",
          "xi3", "xi4"}},
        {"run", {"depth", "seed", "threads", "export_orbit"}},
        {"spectral", {"model", "m", "ell_min", "ell_max"}},
        {"series", {"shell_r", "ratio_floor", "samples", "trials", "point"}},
        {"count", {"r_start", "r_step", "r_count"}},
        {"laplacian", {"h"}},
    };
    return s;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    std::vector<Mat2> xis;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    bool saw_kind = false;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config line " + std::to_string(lineno) +
                                  ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (!schema().count(section))
                throw ConfigError("config: unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (section.empty())
            throw ConfigError("config: key '" + key + "' outside any section");
        if (!schema().at(section).count(key))
            throw ConfigError("config: unknown key '" + key + "' in [" + section + "]");

        if (section == "group") {
            if (key == "kind") {
                saw_kind = true;
                if (val == "trivial") cfg.kind = GroupSpecKind::trivial;
                else if (val == "cyclic") cfg.kind = GroupSpecKind::cyclic;
                else if (val == "schottky") cfg.kind = GroupSpecKind::schottky;
                else if (val == "pair") cfg.kind = GroupSpecKind::pair;
                else throw ConfigError("config: unknown group kind '" + val + "'");
            } else if (key == "T") cfg.T = to_double(key, val);
            else if (key == "side") {
                if (val == "left") cfg.side = CyclicSide::left;
                else if (val == "right") cfg.side = CyclicSide::right;
                else if (val == "both") cfg.side = CyclicSide::both;
                else throw ConfigError("config: unknown side '" + val + "'");
            } else if (key == "T2") cfg.T2 = to_double(key, val);
            else if (key == "k") cfg.k = int(to_long(key, val));
            else if (key == "angles") cfg.angles = to_list(key, val);
            else if (key == "antipode") cfg.antipode = to_bool(key, val);
        } else if (section == "deform") {
            cfg.deform_enabled = true;
            if (key == "mode") {
                if (val == "rotation") cfg.mode = DeformMode::rotation;
                else if (val == "shear") cfg.mode = DeformMode::shear;
                else if (val == "none") cfg.deform_enabled = false;
                else throw ConfigError("config: unknown deform mode '" + val + "'");
            } else if (key == "t") cfg.t = to_double(key, val);
            else if (key == "t_start") cfg.t_start = to_double(key, val);
            else if (key == "t_step") cfg.t_step = to_double(key, val);
            else if (key == "t_count") cfg.t_count = int(to_long(key, val));
            else if (key == "rho_angles") cfg.deform_params.rho_angles = to_list(key, val);
            else {  // xi1..xi4, row-major traceless 2x2
                const auto v = to_list(key, val);
                if (v.size() != 4)
                    throw ConfigError("config: " + key + " needs 4 entries");
                const std::size_t idx = std::size_t(key[2] - '1');
                if (xis.size() <= idx) xis.resize(idx + 1, Mat2{0, 0, 0, 0});
                xis[idx] = Mat2{v[0], v[1], v[2], v[3]};
            }
        } else if (section == "run") {
            if (key == "depth") cfg.depth = int(to_long(key, val));
            else if (key == "seed") cfg.seed = std::uint64_t(to_long(key, val));
            else if (key == "threads") cfg.threads = int(to_long(key, val));
            else if (key == "export_orbit") cfg.export_orbit = to_bool(key, val);
        } else if (section == "spectral") {
            if (key == "model") {
                if (val == "ads") cfg.model = Model::ads;
                else if (val == "su22") cfg.model = Model::su22;
                else throw ConfigError("config: unknown model '" + val + "'");
            } else if (key == "m") cfg.m = int(to_long(key, val));
            else if (key == "ell_min") cfg.ell_min = int(to_long(key, val));
            else if (key == "ell_max") cfg.ell_max = int(to_long(key, val));
        } else if (section == "series") {
            if (key == "shell_r") cfg.shell_r = to_double(key, val);
            else if (key == "ratio_floor") cfg.ratio_floor = to_double(key, val);
            else if (key == "samples") cfg.samples = int(to_long(key, val));
            else if (key == "trials") cfg.trials = int(to_long(key, val));
            else if (key == "point") cfg.point = to_list(key, val);
        } else if (section == "count") {
            if (key == "r_start") cfg.r_start = to_double(key, val);
            else if (key == "r_step") cfg.r_step = to_double(key, val);
            else if (key == "r_count") cfg.r_count = int(to_long(key, val));
        } else if (section == "laplacian") {
            if (key == "h") cfg.h = to_double(key, val);
        }
    }
    if (!saw_kind) throw ConfigError("config: [group] kind is required");

    if (cfg.deform_enabled && cfg.mode == DeformMode::shear && xis.empty()) {
        xis = {Mat2{0, 1, 1, 0}, Mat2{1, 0, 0, -1}};
    }
    cfg.deform_params.xis = xis;
    for (const auto& xi : cfg.deform_params.xis)
        if (std::fabs(xi.a + xi.d) > 1e-12)
            throw ConfigError("config: shear xi matrices must be traceless");

    if (cfg.T <= 0) throw ConfigError("config: T must be positive");
    if (cfg.k < 2 && (cfg.kind == GroupSpecKind::schottky || cfg.kind == GroupSpecKind::pair))
        throw ConfigError("config: schottky/pair groups need k >= 2");
    if (cfg.depth < 0) throw ConfigError("config: depth must be >= 0");
    if (cfg.ell_min < (cfg.model == Model::su22 ? 1 : 0))
        throw ConfigError("config: ell_min out of range");
    if (cfg.ell_max < cfg.ell_min) throw ConfigError("config: ell_max < ell_min");
    if (cfg.shell_r <= 0) throw ConfigError("config: shell_r must be positive");
    if (cfg.m < 2) throw ConfigError("config: m must be >= 2");
    if (cfg.h <= 0) throw ConfigError("config: h must be positive");
    if (int(cfg.point.size()) != cfg.m + 2 && cfg.point.size() != 4)
        throw ConfigError("config: point needs m + 2 coordinates");
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

GeneratorSet build_group(const ExperimentConfig& cfg) {
    GeneratorSet base;
    switch (cfg.kind) {
        case GroupSpecKind::trivial:
            base = make_trivial();
            break;
        case GroupSpecKind::cyclic:
            base = make_cyclic(cfg.T, cfg.side, cfg.T2);
            break;
        case GroupSpecKind::schottky:
        case GroupSpecKind::pair: {
            std::vector<double> angles = cfg.angles;
            if (angles.empty()) {
                for (int i = 0; i < cfg.k; ++i)
                    angles.push_back(double(i) * M_PI / (2.0 * cfg.k));
            }
            if (int(angles.size()) != cfg.k)
                throw ConfigError("config: need one angle per generator");
            base = make_schottky(cfg.k, cfg.T, angles);
            break;
        }
    }
    if (cfg.deform_enabled) {
        if (cfg.kind != GroupSpecKind::schottky && cfg.kind != GroupSpecKind::pair)
            throw ConfigError("config: deform requires a schottky or pair group");
        base = deform(base, cfg.t, cfg.mode, cfg.deform_params);
    }
    if (cfg.antipode) base = with_antipode(std::move(base));
    return base;
}

namespace {
std::string fmt_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}
}  // namespace

std::string config_echo(const ExperimentConfig& cfg) {
    std::ostringstream o;
    o << "[group]\n";
    o << "kind = "
      << (cfg.kind == GroupSpecKind::trivial    ? "trivial"
          : cfg.kind == GroupSpecKind::cyclic   ? "cyclic"
          : cfg.kind == GroupSpecKind::schottky ? "schottky"
                                                : "pair")
      << "\n";
    o << "T = " << fmt_g(cfg.T) << "\n";
    o << "side = "
      << (cfg.side == CyclicSide::left    ? "left"
          : cfg.side == CyclicSide::right ? "right"
                                          : "both")
      << "\n";
    if (cfg.T2) o << "T2 = " << fmt_g(*cfg.T2) << "\n";
    o << "k = " << cfg.k << "\n";
    if (!cfg.angles.empty()) {
        o << "angles = ";
        for (std::size_t i = 0; i < cfg.angles.size(); ++i)
            o << (i ? "," : "") << fmt_g(cfg.angles[i]);
        o << "\n";
    }
    o << "antipode = " << (cfg.antipode ? "true" : "false") << "\n";
    if (cfg.deform_enabled) {
        o << "[deform]\n";
        o << "mode = " << (cfg.mode == DeformMode::rotation ? "rotation" : "shear") << "\n";
        o << "t = " << fmt_g(cfg.t) << "\n";
        o << "t_start = " << fmt_g(cfg.t_start) << "\n";
        o << "t_step = " << fmt_g(cfg.t_step) << "\n";
        o << "t_count = " << cfg.t_count << "\n";
    }
    o << "[run]\n";
    o << "depth = " << cfg.depth << "\n";
    o << "seed = " << cfg.seed << "\n";
    o << "export_orbit = " << (cfg.export_orbit ? "true" : "false") << "\n";
    o << "[spectral]\n";
    o << "model = " << (cfg.model == Model::ads ? "ads" : "su22") << "\n";
    o << "m = " << cfg.m << "\n";
    o << "ell_min = " << cfg.ell_min << "\n";
    o << "ell_max = " << cfg.ell_max << "\n";
    o << "[series]\n";
    o << "shell_r = " << fmt_g(cfg.shell_r) << "\n";
    o << "ratio_floor = " << fmt_g(cfg.ratio_floor) << "\n";
    o << "samples = " << cfg.samples << "\n";
    o << "trials = " << cfg.trials << "\n";
    o << "[count]\n";
    o << "r_start = " << fmt_g(cfg.r_start) << "\n";
    o << "r_step = " << fmt_g(cfg.r_step) << "\n";
    o << "r_count = " << cfg.r_count << "\n";
    o << "[laplacian]\n";
    o << "h = " << fmt_g(cfg.h) << "\n";
    return o.str();
}

}  // namespace ads
