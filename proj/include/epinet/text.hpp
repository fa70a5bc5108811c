#pragma once

#include <string>

namespace epinet {

/// Fixed-notation real with `digits` decimals; used for every CSV value so
/// reruns produce byte-identical files.
std::string fixed(double value, int digits = 6);

/// Shortest round-trip representation ("%.17g"), for config echoes.
std::string exact(double value);

}  // namespace epinet
