#include "carnotkit/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace carnotkit {

namespace {

struct Token {
  std::string text;
  int column = 0;  // 1-based
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    if (line[i] == '#') break;
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) &&
           line[i] != '#')
      ++i;
    tokens.push_back({std::string(line.substr(start, i - start)), static_cast<int>(start) + 1});
  }
  return tokens;
}

bool valid_label(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '.')
      continue;
    return false;
  }
  return !std::isdigit(static_cast<unsigned char>(s[0]));
}

struct ParsedTerm {
  Rat coeff;
  std::string label;
};

/// "c*label", "label", or "0"; empty label marks an explicit zero.
std::optional<ParsedTerm> parse_term(const std::string& text) {
  if (text == "0") return ParsedTerm{Rat(0), ""};
  auto star = text.find('*');
  if (star == std::string::npos) {
    if (!valid_label(text)) return std::nullopt;
    return ParsedTerm{Rat(1), text};
  }
  auto coeff = parse_rational(std::string_view(text).substr(0, star));
  std::string label = text.substr(star + 1);
  if (!coeff || !valid_label(label)) return std::nullopt;
  return ParsedTerm{*coeff, label};
}

}  // namespace

AlgebraDocument parse_algebra_file(std::string_view text) {
  AlgebraDocument doc;
  doc.source = std::string(text);

  std::string name;
  std::optional<int> step;
  std::map<int, std::vector<std::pair<std::string, std::pair<int, int>>>> layer_labels;
  struct RawBracket {
    std::string a, b;
    std::vector<ParsedTerm> terms;
    int line, column;
  };
  std::vector<RawBracket> raw_brackets;

  auto error = [&](int line, int column, std::string msg) {
    doc.diagnostics.push_back({line, column, std::move(msg)});
  };

  std::istringstream stream{doc.source};
  std::string line_text;
  int line_no = 0;
  while (std::getline(stream, line_text)) {
    ++line_no;
    std::vector<Token> tokens = tokenize(line_text);
    if (tokens.empty()) continue;
    const std::string& head = tokens[0].text;

    if (head == "algebra") {
      if (tokens.size() != 2) {
        error(line_no, tokens[0].column, "expected: algebra <name>");
        continue;
      }
      if (!name.empty()) {
        error(line_no, tokens[0].column, "algebra name redefined");
        continue;
      }
      name = tokens[1].text;
    } else if (head == "step") {
      if (tokens.size() != 2) {
        error(line_no, tokens[0].column, "expected: step <s>");
        continue;
      }
      try {
        int s = std::stoi(tokens[1].text);
        if (step) {
          error(line_no, tokens[0].column, "step redefined");
        } else if (s < 1) {
          error(line_no, tokens[1].column, "step must be >= 1");
        } else {
          step = s;
        }
      } catch (...) {
        error(line_no, tokens[1].column, "step must be an integer");
      }
    } else if (head == "layer") {
      if (tokens.size() < 3 || tokens[1].text.empty() || tokens[1].text.back() != ':') {
        error(line_no, tokens[0].column, "expected: layer <i>: <label> [<label> ...]");
        continue;
      }
      int idx = 0;
      try {
        idx = std::stoi(tokens[1].text.substr(0, tokens[1].text.size() - 1));
      } catch (...) {
        error(line_no, tokens[1].column, "layer index must be an integer");
        continue;
      }
      if (idx < 1) {
        error(line_no, tokens[1].column, "layer index must be >= 1");
        continue;
      }
      if (layer_labels.count(idx)) {
        error(line_no, tokens[1].column, "layer " + std::to_string(idx) + " redefined");
        continue;
      }
      auto& labels = layer_labels[idx];
      for (std::size_t t = 2; t < tokens.size(); ++t) {
        if (!valid_label(tokens[t].text)) {
          error(line_no, tokens[t].column, "invalid label '" + tokens[t].text + "'");
          continue;
        }
        labels.emplace_back(tokens[t].text, std::make_pair(line_no, tokens[t].column));
      }
    } else if (head == "bracket") {
      // shape: bracket [a,b] = term (+|- term)*
      if (tokens.size() < 4 || tokens[2].text != "=") {
        error(line_no, tokens[0].column, "expected: bracket [<a>,<b>] = <coeff>*<label> ...");
        continue;
      }
      const std::string& pair = tokens[1].text;
      if (pair.size() < 5 || pair.front() != '[' || pair.back() != ']') {
        error(line_no, tokens[1].column, "expected bracket pair like [X0,X1]");
        continue;
      }
      auto comma = pair.find(',');
      if (comma == std::string::npos) {
        error(line_no, tokens[1].column, "expected bracket pair like [X0,X1]");
        continue;
      }
      RawBracket rb;
      rb.a = pair.substr(1, comma - 1);
      rb.b = pair.substr(comma + 1, pair.size() - comma - 2);
      rb.line = line_no;
      rb.column = tokens[1].column;
      if (!valid_label(rb.a) || !valid_label(rb.b)) {
        error(line_no, tokens[1].column, "invalid labels in bracket pair");
        continue;
      }
      bool bad = false;
      Rat sign(1);
      bool expect_term = true;
      for (std::size_t t = 3; t < tokens.size(); ++t) {
        const std::string& tok = tokens[t].text;
        if (tok == "+" || tok == "-") {
          if (expect_term) {
            error(line_no, tokens[t].column, "dangling sign in bracket expression");
            bad = true;
            break;
          }
          sign = tok == "-" ? Rat(-1) : Rat(1);
          expect_term = true;
          continue;
        }
        auto term = parse_term(tok);
        if (!term) {
          error(line_no, tokens[t].column, "cannot parse term '" + tok + "'");
          bad = true;
          break;
        }
        if (!term->label.empty()) {
          term->coeff *= sign;
          rb.terms.push_back(*term);
        }
        sign = 1;
        expect_term = false;
      }
      if (expect_term && tokens.size() > 4) {
        error(line_no, tokens.back().column, "trailing sign in bracket expression");
        bad = true;
      }
      if (!bad) raw_brackets.push_back(std::move(rb));
    } else {
      error(line_no, tokens[0].column, "unknown directive '" + head + "'");
    }
  }

  if (!step) error(0, 0, "missing 'step' declaration");
  if (layer_labels.empty()) error(0, 0, "no layers declared");
  if (name.empty()) name = "unnamed";

  if (!doc.diagnostics.empty() && !step) return doc;

  // assemble basis ordered by layer, declaration order within a layer
  AlgebraDef def;
  def.name = name;
  def.step = step.value_or(1);
  std::map<std::string, int> index_of;
  for (const auto& [layer, labels] : layer_labels) {
    if (layer > def.step) {
      for (const auto& [label, pos] : labels) {
        (void)label;
        error(pos.first, pos.second,
              "layer " + std::to_string(layer) + " exceeds step " + std::to_string(def.step));
      }
      continue;
    }
    for (const auto& [label, pos] : labels) {
      if (index_of.count(label)) {
        error(pos.first, pos.second, "duplicate label '" + label + "'");
        continue;
      }
      index_of[label] = static_cast<int>(def.labels.size());
      def.labels.push_back(label);
      def.weights.push_back(layer);
    }
  }

  std::map<std::pair<int, int>, std::pair<int, int>> bracket_pos;
  for (const auto& rb : raw_brackets) {
    auto ia = index_of.find(rb.a);
    auto ib = index_of.find(rb.b);
    if (ia == index_of.end()) {
      error(rb.line, rb.column, "unknown label '" + rb.a + "'");
      continue;
    }
    if (ib == index_of.end()) {
      error(rb.line, rb.column, "unknown label '" + rb.b + "'");
      continue;
    }
    const int i = ia->second, j = ib->second;
    auto canon = std::minmax(i, j);
    if (bracket_pos.count({canon.first, canon.second})) {
      error(rb.line, rb.column,
            "bracket [" + rb.a + "," + rb.b + "] duplicates an earlier definition "
            "(antisymmetry makes one of the two orders redundant)");
      continue;
    }
    bracket_pos[{canon.first, canon.second}] = {rb.line, rb.column};
    const int w = def.weights[i] + def.weights[j];
    std::vector<std::pair<int, Rat>> terms;
    bool bad = false;
    for (const auto& term : rb.terms) {
      auto it = index_of.find(term.label);
      if (it == index_of.end()) {
        error(rb.line, rb.column, "unknown label '" + term.label + "' in bracket target");
        bad = true;
        break;
      }
      if (term.coeff != 0 && def.weights[it->second] != w) {
        error(rb.line, rb.column,
              "bracket [" + rb.a + "," + rb.b + "] targets '" + term.label + "' of layer " +
                  std::to_string(def.weights[it->second]) + ", expected layer " +
                  std::to_string(w));
        bad = true;
        break;
      }
      if (term.coeff != 0) terms.emplace_back(it->second, term.coeff);
    }
    if (bad) continue;
    if (!terms.empty()) def.brackets[{i, j}] = std::move(terms);
  }

  doc.def = def;
  if (!doc.diagnostics.empty()) return doc;

  ValidationReport report = validate_algebra(def);
  auto validation_error = [&](int line, int column, std::string msg) {
    doc.diagnostics.push_back({line, column, std::move(msg), Diagnostic::Phase::validation});
  };
  for (const auto& f : report.structural) validation_error(0, 0, "structural: " + f.detail);
  for (const auto& f : report.violations) {
    int line = 0, column = 0;
    if (f.indices.size() >= 2) {
      auto canon = std::minmax(f.indices[0], f.indices[1]);
      auto it = bracket_pos.find({canon.first, canon.second});
      if (it != bracket_pos.end()) {
        line = it->second.first;
        column = it->second.second;
      }
    }
    validation_error(line, column,
                     std::string(finding_kind_name(f.kind)) + " violation: " + f.detail);
  }
  if (doc.diagnostics.empty()) doc.algebra = GradedAlgebra::create(std::move(def));
  return doc;
}

std::string serialize_algebra(const GradedAlgebra& alg) {
  std::ostringstream os;
  os << "algebra " << alg.name() << "\n";
  os << "step " << alg.step() << "\n";
  for (int k = 1; k <= alg.step(); ++k) {
    os << "layer " << k << ":";
    for (int i : alg.layer_indices(k)) os << " " << alg.label(i);
    os << "\n";
  }
  for (const auto& [key, terms] : alg.def().brackets) {
    os << "bracket [" << alg.label(key.first) << "," << alg.label(key.second) << "] =";
    bool first = true;
    for (const auto& [target, coeff] : terms) {
      Rat mag = coeff < 0 ? Rat(-coeff) : coeff;
      if (first) {
        os << " " << to_string(coeff) << "*" << alg.label(target);
        first = false;
      } else {
        os << (coeff < 0 ? " - " : " + ") << to_string(mag) << "*" << alg.label(target);
      }
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace carnotkit
