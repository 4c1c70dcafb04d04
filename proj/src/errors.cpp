#include "psfront/errors.hpp"

#include <sstream>

namespace psfront {

namespace {
std::string syntax_msg(std::size_t offset, const std::string& expected, const std::string& src) {
    std::ostringstream os;
    os << "syntax error at offset " << offset << ": expected " << expected << " in \"" << src
       << "\"";
    return os.str();
}
}  // namespace

SyntaxError::SyntaxError(std::size_t offset, const std::string& expected, const std::string& src)
    : ConfigError(syntax_msg(offset, expected, src)), offset_(offset), expected_(expected) {}

DetDrift::DetDrift(double residual)
    : NumericalError("determinant drift " + std::to_string(residual) + " exceeds tolerance"),
      residual_(residual) {}

IllConditioned::IllConditioned(double rcond, int order, double x, double y, bool has_node)
    : NumericalError([&] {
          std::ostringstream os;
          os << "Birkhoff system ill-conditioned (rcond " << rcond << ", truncation " << order
             << ")";
          if (has_node) os << " at node (" << x << ", " << y << ")";
          os << "; truncation order likely too small";
          return os.str();
      }()),
      rcond_(rcond) {}

TailOverflow::TailOverflow(double tail, double budget, const std::string& where)
    : NumericalError([&] {
          std::ostringstream os;
          os << "dropped-tail mass " << tail << " exceeds budget " << budget << " (" << where
             << "); increase the truncation order";
          return os.str();
      }()) {}

}  // namespace psfront
