#include "varlab/report.hpp"

#include "varlab/numfmt.hpp"

namespace varlab {

std::string to_text(const ProbeReport& report) {
  std::string out;
  out += "name=" + report.name + "\n";
  for (const auto& [key, value] : report.measured)
    out += key + "=" + fmt_full(value) + "\n";
  out += "pass=" + std::string(report.pass ? "true" : "false") + "\n";
  out += "margin=" + fmt_full(report.margin) + "\n";
  if (!report.note.empty()) out += "note=" + report.note + "\n";
  out += "\n";
  return out;
}

}  // namespace varlab
