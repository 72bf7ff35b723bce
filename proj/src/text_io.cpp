#include "fluted/text_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

namespace fluted {

namespace {

enum class Tok { Ident, LParen, RParen, Comma, Not, And, Or, Arrow, DArrow, End };

struct Token {
    Tok kind;
    std::string text;
    SourceSpan span;
};

bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '@';
}
bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '@';
}

class Lexer {
public:
    explicit Lexer(std::string_view s) : s_(s) {}

    Token next() {
        skip_space();
        std::size_t b = pos_;
        if (pos_ >= s_.size()) return {Tok::End, "", {b, b}};
        char c = s_[pos_];
        auto one = [&](Tok k) {
            ++pos_;
            return Token{k, std::string(1, c), {b, pos_}};
        };
        switch (c) {
            case '(': return one(Tok::LParen);
            case ')': return one(Tok::RParen);
            case ',': return one(Tok::Comma);
            case '~': return one(Tok::Not);
            case '&': return one(Tok::And);
            case '|': return one(Tok::Or);
            default: break;
        }
        if (s_.substr(pos_, 3) == "<->") {
            pos_ += 3;
            return {Tok::DArrow, "<->", {b, pos_}};
        }
        if (s_.substr(pos_, 2) == "->") {
            pos_ += 2;
            return {Tok::Arrow, "->", {b, pos_}};
        }
        if (ident_start(c)) {
            while (pos_ < s_.size()) {
                char d = s_[pos_];
                if (ident_char(d)) {
                    ++pos_;
                } else if (d == '{') {
                    // index-set group inside reserved names, e.g. @q{1,2}
                    std::size_t e = pos_ + 1;
                    while (e < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[e])) ||
                                             s_[e] == ','))
                        ++e;
                    if (e >= s_.size() || s_[e] != '}')
                        throw SyntaxError("unterminated '{' in identifier", {pos_, e});
                    pos_ = e + 1;
                } else {
                    break;
                }
            }
            return {Tok::Ident, std::string(s_.substr(b, pos_ - b)), {b, pos_}};
        }
        throw SyntaxError(std::string("unexpected character '") + c + "'", {b, b + 1});
    }

private:
    void skip_space() {
        while (pos_ < s_.size()) {
            char c = s_[pos_];
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else if (c == '%') {
                while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

std::optional<int> variable_index(const std::string& s) {
    if (s.size() < 2 || s[0] != 'x') return std::nullopt;
    int v = 0;
    auto [p, ec] = std::from_chars(s.data() + 1, s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || v < 1 || s[1] == '0')
        return std::nullopt;
    return v;
}

class Parser {
public:
    explicit Parser(std::string_view s) : lex_(s) { advance(); }

    Formula parse() {
        Formula f = parse_iff();
        if (cur_.kind != Tok::End) throw SyntaxError("unexpected '" + cur_.text + "'", cur_.span);
        return f;
    }

private:
    void advance() { cur_ = lex_.next(); }

    void expect(Tok k, const char* what) {
        if (cur_.kind != k)
            throw SyntaxError(std::string("expected ") + what +
                                  (cur_.kind == Tok::End ? " before end of input"
                                                         : ", found '" + cur_.text + "'"),
                              cur_.span);
        advance();
    }

    Formula parse_iff() {
        Formula lhs = parse_imp();
        if (cur_.kind == Tok::DArrow) {
            advance();
            return Formula::iff(lhs, parse_iff());
        }
        return lhs;
    }

    Formula parse_imp() {
        Formula lhs = parse_or();
        if (cur_.kind == Tok::Arrow) {
            advance();
            return Formula::implies(lhs, parse_imp());
        }
        return lhs;
    }

    Formula parse_or() {
        std::vector<Formula> parts{parse_and()};
        while (cur_.kind == Tok::Or) {
            advance();
            parts.push_back(parse_and());
        }
        return parts.size() == 1 ? parts[0] : Formula::disjunction(std::move(parts));
    }

    Formula parse_and() {
        std::vector<Formula> parts{parse_unary()};
        while (cur_.kind == Tok::And) {
            advance();
            parts.push_back(parse_unary());
        }
        return parts.size() == 1 ? parts[0] : Formula::conjunction(std::move(parts));
    }

    int parse_variable() {
        if (cur_.kind != Tok::Ident) throw SyntaxError("expected a variable", cur_.span);
        auto v = variable_index(cur_.text);
        if (!v) throw SyntaxError("'" + cur_.text + "' is not a variable x<N>", cur_.span);
        advance();
        return *v;
    }

    Formula parse_unary() {
        switch (cur_.kind) {
            case Tok::Not:
                advance();
                return Formula::negation(parse_unary());
            case Tok::LParen: {
                advance();
                Formula f = parse_iff();
                expect(Tok::RParen, "')'");
                return f;
            }
            case Tok::Ident: break;
            default:
                throw SyntaxError(cur_.kind == Tok::End ? "unexpected end of input"
                                                        : "unexpected '" + cur_.text + "'",
                                  cur_.span);
        }
        std::string word = cur_.text;
        advance();
        if (word == "forall" || word == "exists") {
            int v = parse_variable();
            Formula body = parse_unary();
            return word == "forall" ? Formula::forall(v, body) : Formula::exists(v, body);
        }
        if (word == "true") return Formula::top();
        if (word == "false") return Formula::bottom();
        std::vector<int> args;
        if (cur_.kind == Tok::LParen) {
            advance();
            args.push_back(parse_variable());
            while (cur_.kind == Tok::Comma) {
                advance();
                args.push_back(parse_variable());
            }
            expect(Tok::RParen, "')' closing argument list");
        }
        return Formula::atom(word, std::move(args));
    }

    Lexer lex_;
    Token cur_{Tok::End, "", {}};
};

void render(const Formula& f, std::string& out);

void render_quant(const char* kw, const Formula& f, std::string& out) {
    out += kw;
    out += " x" + std::to_string(f.var()) + " ";
    std::string b;
    render(f.body(), b);
    if (b.front() == '(') {
        out += b;
    } else {
        out += "(" + b + ")";
    }
}

void render(const Formula& f, std::string& out) {
    switch (f.op()) {
        case Op::True: out += "true"; return;
        case Op::False: out += "false"; return;
        case Op::Atom:
            out += f.pred();
            if (!f.args().empty()) {
                out += '(';
                for (std::size_t i = 0; i < f.args().size(); ++i) {
                    if (i) out += ',';
                    out += "x" + std::to_string(f.args()[i]);
                }
                out += ')';
            }
            return;
        case Op::Not:
            out += '~';
            render(f.body(), out);
            return;
        case Op::And:
        case Op::Or:
        case Op::Implies:
        case Op::Iff: {
            const char* sep = f.op() == Op::And       ? " & "
                              : f.op() == Op::Or      ? " | "
                              : f.op() == Op::Implies ? " -> "
                                                      : " <-> ";
            out += '(';
            for (std::size_t i = 0; i < f.children().size(); ++i) {
                if (i) out += sep;
                render(f.child(i), out);
            }
            out += ')';
            return;
        }
        case Op::Forall: render_quant("forall", f, out); return;
        case Op::Exists: render_quant("exists", f, out); return;
    }
}

std::string tptp_name(const std::string& p) {
    bool lower_word = std::islower(static_cast<unsigned char>(p[0])) &&
                      std::all_of(p.begin(), p.end(), [](char c) {
                          return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
                      });
    if (lower_word) return p;
    std::string q = "'";
    for (char c : p) {
        if (c == '\'' || c == '\\') q += '\\';
        q += c;
    }
    return q + "'";
}

void render_tptp(const Formula& f, std::string& out) {
    switch (f.op()) {
        case Op::True: out += "$true"; return;
        case Op::False: out += "$false"; return;
        case Op::Atom:
            out += tptp_name(f.pred());
            if (!f.args().empty()) {
                out += '(';
                for (std::size_t i = 0; i < f.args().size(); ++i) {
                    if (i) out += ',';
                    out += "X" + std::to_string(f.args()[i]);
                }
                out += ')';
            }
            return;
        case Op::Not:
            out += "~ ";
            render_tptp(f.body(), out);
            return;
        case Op::And:
        case Op::Or:
        case Op::Implies:
        case Op::Iff: {
            const char* sep = f.op() == Op::And       ? " & "
                              : f.op() == Op::Or      ? " | "
                              : f.op() == Op::Implies ? " => "
                                                      : " <=> ";
            out += '(';
            for (std::size_t i = 0; i < f.children().size(); ++i) {
                if (i) out += sep;
                render_tptp(f.child(i), out);
            }
            out += ')';
            return;
        }
        case Op::Forall:
        case Op::Exists:
            out += f.op() == Op::Forall ? "( ! [X" : "( ? [X";
            out += std::to_string(f.var()) + "] : ";
            render_tptp(f.body(), out);
            out += " )";
            return;
    }
}

struct LineCursor {
    std::string_view text;
    std::size_t pos = 0;

    bool next(std::string_view& line, std::size_t& start) {
        while (pos < text.size()) {
            std::size_t e = text.find('\n', pos);
            if (e == std::string_view::npos) e = text.size();
            start = pos;
            line = text.substr(pos, e - pos);
            pos = e + 1;
            std::size_t c = line.find('%');
            if (c != std::string_view::npos) line = line.substr(0, c);
            while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back())))
                line.remove_suffix(1);
            std::size_t lead = 0;
            while (lead < line.size() && std::isspace(static_cast<unsigned char>(line[lead])))
                ++lead;
            line.remove_prefix(lead);
            start += lead;
            if (!line.empty()) return true;
        }
        return false;
    }
};

}  // namespace

Formula parse_formula(std::string_view text) { return Parser(text).parse(); }

std::string render_formula(const Formula& f) {
    std::string out;
    render(f, out);
    return out;
}

std::string render_formula_tptp(const Formula& f, const std::string& name) {
    std::string out = "fof(" + name + ", axiom, ";
    render_tptp(f, out);
    out += ").";
    return out;
}

Structure parse_structure(std::string_view text) {
    LineCursor cur{text};
    std::string_view line;
    std::size_t start = 0;
    if (!cur.next(line, start)) throw SyntaxError("missing 'domain N' header", {0, 0});

    auto parse_int = [&](std::string_view tok, std::size_t at) {
        int v = 0;
        auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc() || p != tok.data() + tok.size() || v < 0)
            throw SyntaxError("expected a non-negative integer, found '" + std::string(tok) + "'",
                              {at, at + tok.size()});
        return v;
    };

    if (line.substr(0, 6) != "domain" || line.size() < 8 ||
        !std::isspace(static_cast<unsigned char>(line[6])))
        throw SyntaxError("expected 'domain N' header", {start, start + line.size()});
    std::size_t off = 7;
    while (off < line.size() && std::isspace(static_cast<unsigned char>(line[off]))) ++off;
    int n = parse_int(line.substr(off), start + off);
    if (n < 1) throw SyntaxError("domain must be nonempty", {start, start + line.size()});
    Structure s(n);

    while (cur.next(line, start)) {
        std::size_t colon = line.find(':');
        if (colon == std::string_view::npos)
            throw SyntaxError("expected 'pred: t1 ... tk'", {start, start + line.size()});
        std::string_view name = line.substr(0, colon);
        while (!name.empty() && std::isspace(static_cast<unsigned char>(name.back())))
            name.remove_suffix(1);
        if (name.empty() || !ident_start(name[0]) ||
            !std::all_of(name.begin(), name.end(),
                         [](char c) { return ident_char(c) || c == '{' || c == '}' || c == ','; }))
            throw SyntaxError("bad predicate name", {start, start + colon});
        std::vector<int> tuple;
        std::size_t i = colon + 1;
        while (i < line.size()) {
            if (std::isspace(static_cast<unsigned char>(line[i]))) {
                ++i;
                continue;
            }
            std::size_t j = i;
            while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
            int v = parse_int(line.substr(i, j - i), start + i);
            if (v >= n)
                throw ElementOutOfRange("element " + std::to_string(v) + " not below domain size " +
                                            std::to_string(n),
                                        {start + i, start + j});
            tuple.push_back(v);
            i = j;
        }
        std::string pname(name);
        const Relation* existing = s.relation(pname);
        if (existing && existing->arity != static_cast<int>(tuple.size()))
            throw SyntaxError("tuple length differs from earlier lines for '" + pname + "'",
                              {start, start + line.size()});
        s.set(pname, tuple, true);
    }
    return s;
}

std::string render_structure(const Structure& s) {
    std::ostringstream out;
    out << "domain " << s.size() << "\n";
    const std::uint64_t n = static_cast<std::uint64_t>(s.size());
    for (const auto& [name, rel] : s.relations()) {
        for (std::uint64_t idx = 0; idx < rel.bits.size(); ++idx) {
            if (!rel.bits[idx]) continue;
            // bits are laid out so ascending index is ascending numeric tuple order
            std::vector<std::uint64_t> t(static_cast<std::size_t>(rel.arity));
            std::uint64_t r = idx;
            for (int k = rel.arity - 1; k >= 0; --k) {
                t[static_cast<std::size_t>(k)] = r % n;
                r /= n;
            }
            out << name << ":";
            for (auto v : t) out << ' ' << v;
            out << "\n";
        }
    }
    return out.str();
}

}  // namespace fluted
