#pragma once

#include "surfkit/wizard/knowledge_base.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace surfkit::wizard {

/// Line-oriented KB text:
///
///   Sanding type Task                      # triple
///   Fiberglass label "fiberglass"          # quoted string object
///   FS_force paramValue 5~N                # quantity
///   @functional paramValue
///   @rule name: head(?a, ?b) :- p(?a, ?x), q(?x, ?b).
///   @workflow Id
///     start StepA
///     StepA -> StepB [key = true, count > 0]
///   @end
///
/// Workflows are validated once the whole text is read. Throws ParseError
/// ("source:line: message") and ConsistencyError.
KnowledgeBase parse_kb(std::string_view text, const std::string& source = "<kb>");
KnowledgeBase load_kb(const std::filesystem::path& path);

/// Text of the knowledge base compiled into the library.
std::string_view default_kb_text();
const KnowledgeBase& default_kb();

/// Parses a single literal or symbol token as it appears in KB text.
Value parse_kb_value(std::string_view token);

}  // namespace surfkit::wizard
