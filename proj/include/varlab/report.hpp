#pragma once

#include <map>
#include <string>

namespace varlab {

/// Named diagnostic record. `pass` and `margin` are coupled: a report
/// passes exactly when its margin is >= 0. Measured values are kept in a
/// sorted map so serialization is deterministic.
struct ProbeReport {
  std::string name;
  std::map<std::string, double> measured;
  bool pass = false;
  double margin = 0.0;
  std::string note;  // free-form flags: "degenerate-window", "constant", ...

  void set_margin(double m) {
    margin = m;
    pass = m >= 0.0;
  }
};

/// key=value text block, one line per entry, terminated by a blank line.
std::string to_text(const ProbeReport& report);

}  // namespace varlab
