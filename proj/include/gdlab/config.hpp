#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "gdlab/geometry.hpp"
#include "gdlab/scale.hpp"

namespace gdlab {

/// Flat `key = value` configuration with '#' comments. Keys are consumed
/// as they are read; finalize() rejects any leftover (unknown keys are
/// errors, fail-fast).
class ConfigMap {
  public:
    static ConfigMap parse_file(const std::string& path);
    static ConfigMap parse_string(const std::string& text);

    bool has(const std::string& key) const { return raw_.count(key) > 0; }
    std::string get_string(const std::string& key);
    std::string get_string(const std::string& key, const std::string& def);
    int64_t get_int(const std::string& key);
    int64_t get_int(const std::string& key, int64_t def);
    double get_double(const std::string& key);
    double get_double(const std::string& key, double def);
    bool get_bool(const std::string& key, bool def);
    /// Bracketed list of numbers: [1, 2.5, 3e4].
    std::vector<double> get_list(const std::string& key);
    std::vector<double> get_list(const std::string& key, std::vector<double> def);

    /// Throws if any key was never consumed.
    void finalize() const;

  private:
    std::string take(const std::string& key);
    std::map<std::string, std::string> raw_;
    std::set<std::string> consumed_;
};

/// `power(c, alpha)`, `steps([(t1,a1),(t2,a2),...])`, or `table(path.csv)`
/// (CSV with header `t,value`).
ScaleFunction parse_scale_spec(const std::string& spec);

/// `ball(r)`, `ellipsoid(a1,...,ad)`, or `radial_table(path.csv)`
/// (CSV with header `theta,phi,r` on a regular grid; d = 3).
StarDomain parse_shape_spec(const std::string& spec, int d);

}  // namespace gdlab
