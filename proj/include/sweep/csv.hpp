#pragma once

#include <cmath>
#include <iomanip>
#include <locale>
#include <sstream>
#include <string>

namespace sweep {

/// %.17g in the classic locale, so that every double round-trips.
inline std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  std::ostringstream out;
  out.imbue(std::locale::classic());
  out << std::setprecision(17) << value;
  return out.str();
}

}  // namespace sweep
