#include "surfkit/wizard/transcript.hpp"

#include "surfkit/error.hpp"

namespace surfkit::wizard {

std::string format_transcript(const std::vector<TranscriptEntry>& entries) {
  std::string out;
  for (const auto& e : entries) {
    out += e.speaker;
    out += ": ";
    for (char c : e.text) {
      if (c == '\\') {
        out += "\\\\";
      } else if (c == '\n') {
        out += "\\n";
      } else {
        out += c;
      }
    }
    out += '\n';
  }
  return out;
}

std::vector<TranscriptEntry> parse_transcript(std::string_view text) {
  std::vector<TranscriptEntry> out;
  std::size_t pos = 0, line_no = 0;
  while (pos < text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    const std::size_t colon = line.find(": ");
    if (colon == std::string_view::npos)
      throw Error(Errc::ParseError, "transcript:" + std::to_string(line_no) + ": expected 'speaker: text'");
    TranscriptEntry e;
    e.speaker = std::string(line.substr(0, colon));
    if (e.speaker != "wizard" && e.speaker != "user" && e.speaker != "action" && e.speaker != "result")
      throw Error(Errc::ParseError, "transcript:" + std::to_string(line_no) + ": unknown speaker '" + e.speaker + "'");
    const std::string_view body = line.substr(colon + 2);
    for (std::size_t i = 0; i < body.size(); ++i) {
      if (body[i] == '\\' && i + 1 < body.size()) {
        e.text += body[i + 1] == 'n' ? '\n' : body[i + 1];
        ++i;
      } else {
        e.text += body[i];
      }
    }
    out.push_back(std::move(e));
  }
  return out;
}

ReplayResult replay_transcript(const Wizard& wizard, const std::vector<TranscriptEntry>& entries,
                               std::string session_id) {
  ReplayResult r{wizard.create_session(std::move(session_id)), {}};
  auto record = [&r] {
    if (r.session.action) r.actions.push_back(r.session.action->name);
  };
  record();
  for (const auto& e : entries) {
    if (e.speaker == "user") {
      wizard.answer(r.session, e.text);
    } else if (e.speaker == "result") {
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(e.text);
      } catch (const nlohmann::json::exception& ex) {
        throw Error(Errc::ParseError, std::string("transcript result line: ") + ex.what());
      }
      wizard.deliver(r.session, action_result_from_json(j));
    } else {
      continue;
    }
    record();
  }
  return r;
}

}  // namespace surfkit::wizard
