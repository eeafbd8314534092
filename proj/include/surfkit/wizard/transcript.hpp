#pragma once

#include "surfkit/wizard/session.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace surfkit::wizard {

/// One "speaker: text" line per entry. Backslashes and newlines inside
/// text are escaped.
std::string format_transcript(const std::vector<TranscriptEntry>& entries);
/// Blank lines and lines starting with '#' are skipped. Throws ParseError.
std::vector<TranscriptEntry> parse_transcript(std::string_view text);

struct ReplayResult {
  WizardSession session;
  std::vector<std::string> actions;  // names in emission order
};

/// Feeds the user and result lines of `entries` to a fresh session.
/// Wizard and action lines are not consulted; compare the returned
/// transcript against the input to check a recording.
ReplayResult replay_transcript(const Wizard& wizard, const std::vector<TranscriptEntry>& entries,
                               std::string session_id = "replay");

}  // namespace surfkit::wizard
