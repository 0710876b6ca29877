#pragma once

#include "dwt/algebra.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace dwt::cli {

/// Parse "a+bi" style literals ("2", "-i", "1e-3-2.5i", "0+1i").
cplx parse_complex(const std::string& text);
/// Comma separated list of complex literals.
std::vector<cplx> parse_complex_list(const std::string& text);
std::vector<double> parse_real_list(const std::string& text);

/// Entry point shared by the executable and the tests; returns the exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dwt::cli
