#pragma once

#include <stdexcept>
#include <string>
#include <variant>

#include "entreg/types.hpp"

namespace entreg {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int col, const std::string& what)
      : std::runtime_error("parse error at line " + std::to_string(line) + ", column " +
                           std::to_string(col) + ": " + what),
        line_(line),
        col_(col) {}

  int line() const { return line_; }
  int col() const { return col_; }

 private:
  int line_;
  int col_;
};

using ParsedInstance = std::variant<LpInstance, SdpInstance, OtInstance>;

/// Parses the whitespace-separated instance grammar ('#' starts a comment
/// running to end of line). The header token selects the kind: LP, SDP, or
/// OT. Instance invariants are validated; any defect raises ParseError with
/// the offending position.
ParsedInstance parse_instance(const std::string& text);
ParsedInstance parse_instance_file(const std::string& path);

/// Canonical text form; numbers carry 17 significant digits so that
/// serialize/parse round-trips reproduce every double bit for bit.
std::string serialize(const LpInstance& inst);
std::string serialize(const SdpInstance& inst);
std::string serialize(const OtInstance& inst);
std::string serialize(const ParsedInstance& inst);

/// 17-significant-digit rendering used everywhere numbers are written.
std::string format_number(double v);

/// Accumulates a report: "key = value" lines for scalars, then named
/// vector/matrix blocks in the instance grammar's number format. The
/// "text" rendering indents the same content for reading; "keyvalue" is
/// the machine-stable one.
class ReportWriter {
 public:
  void scalar(const std::string& key, double v);
  void scalar(const std::string& key, int v);
  void scalar(const std::string& key, bool v);
  void scalar(const std::string& key, const std::string& v);
  void vector_block(const std::string& name, const VectorXd& v);
  void matrix_block(const std::string& name, const MatrixXd& m);
  void blank();

  std::string str(const std::string& format) const;  // "text" or "keyvalue"

 private:
  struct Item {
    std::string key;
    std::string value;
    bool is_block = false;
  };
  std::vector<Item> items_;
};

/// Report body for a solve, shared by the CLI subcommands and tests.
void append_solve_report(ReportWriter& w, const SolveReport& rep, const std::string& kind);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace entreg
