#pragma once

#include "pbcp/diagnostics.hpp"

#include <cctype>
#include <string>
#include <vector>

namespace pbcp {

enum class TokKind {
    End,
    Ident,
    Number,  // unsigned integer or decimal; sign handled by the parser
    LBrace,
    RBrace,
    LParen,
    RParen,
    Comma,
    Dot,
    Colon,
    DoubleColon,
    Eq,
    Neq,
    Amp,
    Tilde,
    Slash,
    Minus,
};

struct Token {
    TokKind kind = TokKind::End;
    std::string text;
    SourcePos pos;
};

// '%' starts a line comment. '.' is a statement terminator unless it sits
// between digits (decimal literals).
inline std::vector<Token> lex(const std::string& src, std::vector<Diagnostic>& diags) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto pos = [&]() { return SourcePos{line, col}; };
    auto advance = [&](std::size_t n = 1) {
        for (std::size_t k = 0; k < n && i < src.size(); ++k) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++i;
        }
    };
    while (i < src.size()) {
        char c = src[i];
        if (c == '%') {
            while (i < src.size() && src[i] != '\n') advance();
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance();
            continue;
        }
        SourcePos p = pos();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string s;
            while (i < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_')) {
                s += src[i];
                advance();
            }
            out.push_back({TokKind::Ident, s, p});
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string s;
            while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) {
                s += src[i];
                advance();
            }
            if (i + 1 < src.size() && src[i] == '.' &&
                std::isdigit(static_cast<unsigned char>(src[i + 1]))) {
                s += '.';
                advance();
                while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) {
                    s += src[i];
                    advance();
                }
            }
            out.push_back({TokKind::Number, s, p});
            continue;
        }
        switch (c) {
            case '{': out.push_back({TokKind::LBrace, "{", p}); advance(); break;
            case '}': out.push_back({TokKind::RBrace, "}", p}); advance(); break;
            case '(': out.push_back({TokKind::LParen, "(", p}); advance(); break;
            case ')': out.push_back({TokKind::RParen, ")", p}); advance(); break;
            case ',': out.push_back({TokKind::Comma, ",", p}); advance(); break;
            case '.': out.push_back({TokKind::Dot, ".", p}); advance(); break;
            case '&': out.push_back({TokKind::Amp, "&", p}); advance(); break;
            case '~': out.push_back({TokKind::Tilde, "~", p}); advance(); break;
            case '/': out.push_back({TokKind::Slash, "/", p}); advance(); break;
            case '-': out.push_back({TokKind::Minus, "-", p}); advance(); break;
            case ':':
                if (i + 1 < src.size() && src[i + 1] == ':') {
                    out.push_back({TokKind::DoubleColon, "::", p});
                    advance(2);
                } else {
                    out.push_back({TokKind::Colon, ":", p});
                    advance();
                }
                break;
            case '=':
                out.push_back({TokKind::Eq, "=", p});
                advance();
                break;
            case '!':
                if (i + 1 < src.size() && src[i + 1] == '=') {
                    out.push_back({TokKind::Neq, "!=", p});
                    advance(2);
                } else {
                    diags.push_back(make_error(p, "unexpected character '!'"));
                    advance();
                }
                break;
            default:
                diags.push_back(make_error(p, std::string("unexpected character '") + c + "'"));
                advance();
                break;
        }
    }
    out.push_back({TokKind::End, "", pos()});
    return out;
}

}  // namespace pbcp
