#ifndef TABSIM_TESTS_SUPPORT_HPP
#define TABSIM_TESTS_SUPPORT_HPP

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "tabsim/matrix.hpp"

namespace tabsim::tests {

inline std::string fixture_path(const std::string& name) {
    return std::string(TABSIM_FIXTURE_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

/// max_i |a_i - b_i| / max(1, |b|_inf)
inline double rel_dev(const Vec& got, const Vec& want) {
    return max_abs_diff(got, want) / std::max(1.0, max_abs(want));
}

inline double rel_dev(double got, double want) {
    return std::abs(got - want) / std::max(1.0, std::abs(want));
}

}  // namespace tabsim::tests

#endif
