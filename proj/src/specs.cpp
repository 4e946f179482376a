#include "haltseries/specs.hpp"

#include "haltseries/errors.hpp"

#include <fstream>
#include <sstream>

namespace hs {
namespace {

std::vector<std::string> words_of(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = text.find(sep, start);
    out.emplace_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

Rational rational_at(const std::string& token, std::size_t line) {
  try {
    return parse_rational(token);
  } catch (const std::invalid_argument& e) {
    throw ParseError(line, e.what());
  }
}

Index index_of(const std::string& token, std::size_t line, std::string_view context) {
  try {
    Natural n = parse_natural(token);
    if (!n.fits_ulong_p()) throw std::invalid_argument("too large");
    return n.get_ui();
  } catch (const std::invalid_argument&) {
    throw ParseError(line, std::string(context) + ": expected a natural number, got '" + token + "'");
  }
}

std::string read_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ParseError(0, "cannot open '" + file.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

CoefficientStream parse_series_spec(std::string_view text, const std::filesystem::path& base_dir) {
  std::string directive;
  std::size_t directive_line = 0;
  std::size_t line_no = 0;
  for (const auto& raw : split(text, '\n')) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (words_of(line).empty()) continue;
    if (!directive.empty()) throw ParseError(line_no, "series spec has more than one directive");
    directive = std::string(line);
    directive_line = line_no;
  }
  if (directive.empty()) throw ParseError(0, "empty series spec");

  const auto words = words_of(directive);
  const std::string& keyword = words.front();
  if (keyword == "builtin") {
    if (words.size() < 2) throw ParseError(directive_line, "builtin: missing name");
    std::vector<Rational> params;
    for (std::size_t i = 2; i < words.size(); ++i) params.push_back(rational_at(words[i], directive_line));
    try {
      return builtin_stream(words[1], params);
    } catch (const std::invalid_argument& e) {
      throw ParseError(directive_line, e.what());
    }
  }
  if (keyword == "halting") {
    if (words.size() != 3) throw ParseError(directive_line, "halting: expected <program-file> <input>");
    std::filesystem::path file = words[1];
    if (file.is_relative()) file = base_dir / file;
    Natural input;
    try {
      input = parse_natural(words[2]);
    } catch (const std::invalid_argument& e) {
      throw ParseError(directive_line, e.what());
    }
    return CoefficientStream::halting(load_program(file), input);
  }
  if (keyword == "explicit") {
    const auto parts = split(directive.substr(directive.find("explicit") + 8), '|');
    if (parts.size() > 2) throw ParseError(directive_line, "explicit: more than one '|'");
    std::vector<Rational> prefix;
    for (const auto& w : words_of(parts[0])) prefix.push_back(rational_at(w, directive_line));
    Rational tail = 0;
    if (parts.size() == 2) {
      const auto t = words_of(parts[1]);
      if (t.size() != 2 || t[0] != "tail") throw ParseError(directive_line, "explicit: expected '| tail <c>'");
      tail = rational_at(t[1], directive_line);
    }
    return CoefficientStream::explicit_sequence(std::move(prefix), std::move(tail));
  }
  throw ParseError(directive_line, "unknown series directive '" + keyword + "'");
}

MachineProgram load_program(const std::filesystem::path& file) {
  const std::string text = read_file(file);
  try {
    return parse_program(text);
  } catch (const ParseError& e) {
    throw ParseError(0, file.string() + ": " + e.what());
  }
}

CoefficientStream load_series_spec(const std::filesystem::path& file) {
  const std::string text = read_file(file);
  try {
    return parse_series_spec(text, file.parent_path());
  } catch (const ParseError& e) {
    throw ParseError(0, file.string() + ": " + e.what());
  }
}

RateFunction parse_rate(std::string_view text) {
  const auto fields = split(text, ':');
  const std::string& form = fields.front();
  auto expect = [&](std::size_t n) {
    if (fields.size() != n) throw ParseError(0, "rate '" + std::string(text) + "': wrong number of fields");
  };
  if (form == "exptail") {
    expect(1);
    return RateFunction::exp_tail();
  }
  if (form == "const") {
    expect(2);
    return RateFunction::constant(index_of(fields[1], 0, "const rate"));
  }
  if (form == "linear") {
    expect(3);
    return RateFunction::linear(index_of(fields[1], 0, "linear rate"), index_of(fields[2], 0, "linear rate"));
  }
  if (form == "table") {
    const std::string body(text.substr(6));
    std::vector<RateFunction::Entry> entries;
    for (const auto& item : split(body, ',')) {
      const auto f = split(item, ':');
      if (f.size() != 3) throw ParseError(0, "rate table entry '" + item + "': expected M:R:N");
      RateFunction::Entry e;
      e.m = static_cast<unsigned>(index_of(f[0], 0, "rate table m"));
      if (f[1] != "*") e.r_upper = rational_at(f[1], 0);
      e.terms = index_of(f[2], 0, "rate table N");
      entries.push_back(std::move(e));
    }
    try {
      return RateFunction::tabulated(std::move(entries));
    } catch (const std::invalid_argument& e) {
      throw ParseError(0, e.what());
    }
  }
  throw ParseError(0, "unknown rate '" + std::string(text) + "'");
}

}  // namespace hs
