#include "gdlab/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "gdlab/csv.hpp"

namespace gdlab {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

std::vector<double> parse_number_list(const std::string& body, const std::string& what) {
    std::vector<double> out;
    std::string cell;
    std::istringstream ls(body);
    while (std::getline(ls, cell, ',')) {
        cell = trim(cell);
        if (cell.empty()) continue;
        size_t pos = 0;
        out.push_back(std::stod(cell, &pos));
        if (pos != cell.size()) throw std::invalid_argument(what + ": bad number '" + cell + "'");
    }
    return out;
}

}  // namespace

ConfigMap ConfigMap::parse_string(const std::string& text) {
    ConfigMap cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
        if (!cfg.raw_.emplace(key, value).second)
            throw std::invalid_argument("config: duplicate key '" + key + "'");
    }
    return cfg;
}

ConfigMap ConfigMap::parse_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("config: cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_string(ss.str());
}

std::string ConfigMap::take(const std::string& key) {
    auto it = raw_.find(key);
    if (it == raw_.end()) throw std::invalid_argument("config: missing key '" + key + "'");
    consumed_.insert(key);
    return it->second;
}

std::string ConfigMap::get_string(const std::string& key) { return take(key); }

std::string ConfigMap::get_string(const std::string& key, const std::string& def) {
    if (!has(key)) return def;
    return take(key);
}

int64_t ConfigMap::get_int(const std::string& key) {
    std::string v = take(key);
    size_t pos = 0;
    int64_t r = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("config: key '" + key + "' is not an integer");
    return r;
}

int64_t ConfigMap::get_int(const std::string& key, int64_t def) {
    return has(key) ? get_int(key) : def;
}

double ConfigMap::get_double(const std::string& key) {
    std::string v = take(key);
    size_t pos = 0;
    double r = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("config: key '" + key + "' is not a number");
    return r;
}

double ConfigMap::get_double(const std::string& key, double def) {
    return has(key) ? get_double(key) : def;
}

bool ConfigMap::get_bool(const std::string& key, bool def) {
    if (!has(key)) return def;
    std::string v = take(key);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw std::invalid_argument("config: key '" + key + "' is not a boolean");
}

std::vector<double> ConfigMap::get_list(const std::string& key) {
    std::string v = take(key);
    if (v.size() < 2 || v.front() != '[' || v.back() != ']')
        throw std::invalid_argument("config: key '" + key + "' is not a bracketed list");
    return parse_number_list(v.substr(1, v.size() - 2), "config list " + key);
}

std::vector<double> ConfigMap::get_list(const std::string& key, std::vector<double> def) {
    return has(key) ? get_list(key) : def;
}

void ConfigMap::finalize() const {
    for (const auto& [key, value] : raw_)
        if (!consumed_.count(key))
            throw std::invalid_argument("config: unknown key '" + key + "'");
}

namespace {

// Splits "name(args)" into name and args; returns false on mismatch.
bool split_call(const std::string& spec, std::string& name, std::string& args) {
    size_t open = spec.find('(');
    if (open == std::string::npos || spec.back() != ')') return false;
    name = trim(spec.substr(0, open));
    args = spec.substr(open + 1, spec.size() - open - 2);
    return true;
}

}  // namespace

ScaleFunction parse_scale_spec(const std::string& spec) {
    std::string name, args;
    if (!split_call(trim(spec), name, args))
        throw std::invalid_argument("scale spec: expected power(...), steps(...) or table(...)");
    if (name == "power") {
        auto nums = parse_number_list(args, "scale power");
        if (nums.size() != 2) throw std::invalid_argument("scale power: expected (c, alpha)");
        return ScaleFunction::power(nums[0], nums[1]);
    }
    if (name == "steps") {
        // steps([(t1,a1),(t2,a2),...]) -- strip brackets and parens.
        std::string flat;
        for (char ch : args)
            if (ch != '[' && ch != ']' && ch != '(' && ch != ')') flat += ch;
        auto nums = parse_number_list(flat, "scale steps");
        if (nums.size() < 2 || nums.size() % 2 != 0)
            throw std::invalid_argument("scale steps: expected (t,a) pairs");
        std::vector<double> times, levels;
        for (size_t i = 0; i < nums.size(); i += 2) {
            times.push_back(nums[i]);
            levels.push_back(nums[i + 1]);
        }
        return ScaleFunction::piecewise(times, levels);
    }
    if (name == "table") {
        CsvTable t = read_csv(trim(args));
        int ct = t.column("t"), cv = t.column("value");
        std::vector<std::pair<double, double>> samples;
        for (size_t r = 0; r < t.rows.size(); ++r)
            samples.emplace_back(t.number(r, ct), t.number(r, cv));
        return ScaleFunction::tabulated(std::move(samples));
    }
    throw std::invalid_argument("scale spec: unknown form '" + name + "'");
}

StarDomain parse_shape_spec(const std::string& spec, int d) {
    std::string name, args;
    if (!split_call(trim(spec), name, args))
        throw std::invalid_argument("shape spec: expected ball(...), ellipsoid(...) or radial_table(...)");
    if (name == "ball") {
        auto nums = parse_number_list(args, "shape ball");
        if (nums.size() != 1) throw std::invalid_argument("shape ball: expected (radius)");
        return StarDomain::ball(d, nums[0]);
    }
    if (name == "ellipsoid") {
        auto nums = parse_number_list(args, "shape ellipsoid");
        if (static_cast<int>(nums.size()) != d)
            throw std::invalid_argument("shape ellipsoid: expected d semi-axes");
        return StarDomain::ellipsoid(nums);
    }
    if (name == "radial_table") {
        if (d != 3) throw std::invalid_argument("shape radial_table: supported for d = 3 only");
        CsvTable t = read_csv(trim(args));
        int cth = t.column("theta"), cph = t.column("phi"), cr = t.column("r");
        std::vector<double> thetas, phis;
        for (size_t r = 0; r < t.rows.size(); ++r) {
            double th = t.number(r, cth), ph = t.number(r, cph);
            auto it = std::lower_bound(thetas.begin(), thetas.end(), th);
            if (it == thetas.end() || *it != th) thetas.insert(it, th);
            auto ip = std::lower_bound(phis.begin(), phis.end(), ph);
            if (ip == phis.end() || *ip != ph) phis.insert(ip, ph);
        }
        size_t nt = thetas.size(), np = phis.size();
        if (nt * np != t.rows.size())
            throw std::invalid_argument("shape radial_table: rows must form a theta x phi grid");
        std::vector<double> radii(nt * np, -1.0);
        for (size_t r = 0; r < t.rows.size(); ++r) {
            size_t i = static_cast<size_t>(std::lower_bound(thetas.begin(), thetas.end(), t.number(r, cth)) -
                                           thetas.begin());
            size_t j = static_cast<size_t>(std::lower_bound(phis.begin(), phis.end(), t.number(r, cph)) -
                                           phis.begin());
            radii[i * np + j] = t.number(r, cr);
        }
        for (double rr : radii)
            if (rr < 0) throw std::invalid_argument("shape radial_table: incomplete grid");
        // Crude Lipschitz estimate from grid differences.
        double lip = 0.0;
        for (size_t i = 0; i + 1 < nt; ++i)
            for (size_t j = 0; j < np; ++j)
                lip = std::max(lip, std::abs(radii[(i + 1) * np + j] - radii[i * np + j]) /
                                        (thetas[i + 1] - thetas[i]));
        return StarDomain::radial_table(thetas, phis, radii, lip);
    }
    throw std::invalid_argument("shape spec: unknown form '" + name + "'");
}

}  // namespace gdlab
