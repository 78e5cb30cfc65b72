#pragma once

#include <string>

#include "resonate/scenario.hpp"

namespace resonate {

// Line-oriented `key = value` block; identical input -> byte-identical output.
std::string machine_report(const AnalysisBundle& bundle);

// Human-readable rendering of the same content.
std::string text_report(const AnalysisBundle& bundle, bool with_asymptotics = false);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace resonate
