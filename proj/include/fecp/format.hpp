#pragma once

#include <string>

namespace fecp {

// Fixed 6-decimal text. Values within 1e-12 of a half unit in the last
// place are treated as exact decimal ties and rounded half to even, so
// that e.g. 0.7846875 prints 0.784688 whichever side of the tie its
// binary representation lands on. Never prints "-0.000000".
std::string format_fixed6(double v);

}  // namespace fecp
