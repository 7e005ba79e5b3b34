#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "scenegen/oracle.hpp"

namespace scenegen {

struct ChatMessage {
  std::string role;  // "system" or "user"
  std::string content;

  friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

/// Replaces every {{name}} with vars[name]. Throws Error for a name that is
/// not in `vars`.
std::string render_template(std::string_view tmpl, const std::map<std::string, std::string>& vars);

/// Spelled-out count for small numbers ("two"), digits otherwise.
std::string count_word(int n);

/// Prompt text per query kind: one file per kind plus a shared system file,
/// named <kind>.txt (system.txt, room.txt, region.txt, objects.txt,
/// supported.txt, anchor.txt, side.txt, cells.txt, side_eval.txt,
/// full_layout.txt).
class PromptTemplates {
 public:
  PromptTemplates() = default;
  explicit PromptTemplates(std::map<std::string, std::string> templates) : templates_(std::move(templates)) {}

  /// Reads every *.txt in `dir`. Absent kinds only fail when rendered.
  static PromptTemplates load(const std::filesystem::path& dir);

  /// System turn followed by one user turn. Throws MissingTemplate.
  std::vector<ChatMessage> render(const OracleQuery& query) const;

  /// The variables a query exposes to its template.
  static std::map<std::string, std::string> variables(const OracleQuery& query);

  /// Canonical text of the rendered messages; fingerprints hash this.
  std::string canonical_text(const OracleQuery& query) const;
  std::string fingerprint(const OracleQuery& query) const;

  bool has(const std::string& name) const { return templates_.contains(name); }

 private:
  const std::string& get(const std::string& name) const;

  std::map<std::string, std::string> templates_;
};

}  // namespace scenegen
