#pragma once

#include <string>

namespace wordclust {

// Locale-independent number formatting for CSV/TSV outputs.
std::string format_significant(double value, int digits = 6);
std::string format_fixed(double value, int decimals = 2);

}  // namespace wordclust
