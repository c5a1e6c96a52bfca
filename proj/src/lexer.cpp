#include <cctype>
#include <charconv>

#include "invforge/expr.hpp"

namespace invforge::expr {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

}  // namespace

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (digit(c) || (c == '.' && i + 1 < n && digit(text[i + 1]))) {
      while (i < n && digit(text[i])) ++i;
      if (i < n && text[i] == '.') {
        ++i;
        while (i < n && digit(text[i])) ++i;
      }
      if (i < n && (text[i] == 'e' || text[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < n && (text[j] == '+' || text[j] == '-')) ++j;
        if (j < n && digit(text[j])) {
          i = j;
          while (i < n && digit(text[i])) ++i;
        }
      }
      Token t{TokenKind::number, std::string(text.substr(start, i - start)), 0.0, {start, i}};
      const auto r = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.number);
      if (r.ec != std::errc() || r.ptr != t.text.data() + t.text.size())
        throw ParseError("malformed number '" + t.text + "'", t.span);
      out.push_back(std::move(t));
      continue;
    }
    if (ident_start(c)) {
      while (i < n && ident_char(text[i])) ++i;
      out.push_back({TokenKind::ident, std::string(text.substr(start, i - start)), 0.0, {start, i}});
      continue;
    }
    TokenKind kind;
    switch (c) {
      case '(': kind = TokenKind::lparen; break;
      case ')': kind = TokenKind::rparen; break;
      case ',': kind = TokenKind::comma; break;
      case ';': kind = TokenKind::semicolon; break;
      case '+': kind = TokenKind::plus; break;
      case '-': kind = TokenKind::minus; break;
      case '*': kind = TokenKind::star; break;
      case '/': kind = TokenKind::slash; break;
      case '^': kind = TokenKind::caret; break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", {start, start + 1});
    }
    ++i;
    out.push_back({kind, std::string(1, c), 0.0, {start, i}});
  }
  out.push_back({TokenKind::end, "", 0.0, {n, n}});
  return out;
}

}  // namespace invforge::expr
