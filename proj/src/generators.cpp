#include "fluted/generators.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <sstream>

#include "fluted/errors.hpp"
#include "fluted/text_io.hpp"

namespace fluted {

std::uint64_t tower(int k, std::uint64_t n) {
    if (k < 0) throw Error("tower: negative height");
    std::uint64_t v = n;
    for (int i = 0; i < k; ++i) {
        if (v >= 63) throw Overflow("tower(" + std::to_string(k) + "," + std::to_string(n) + ") does not fit in 64 bits");
        v = std::uint64_t{1} << v;
    }
    return v;
}

namespace {

std::string join(std::initializer_list<std::string> parts) {
    std::string out;
    for (const auto& p : parts) {
        if (!out.empty()) out += '.';
        out += p;
    }
    return out;
}
std::string str(int i) { return std::to_string(i); }

Formula at(const std::string& p, std::vector<int> args) { return Formula::atom(p, std::move(args)); }
// p(x_a, ..., x_b)
Formula span_atom(const std::string& p, int a, int b) {
    std::vector<int> args;
    for (int v = a; v <= b; ++v) args.push_back(v);
    return at(p, std::move(args));
}
Formula foralls(int from, int to, Formula body) {
    for (int v = to; v >= from; --v) body = mk_forall(v, body);
    return body;
}
Formula sgn(bool pos, const Formula& f) { return pos ? f : mk_not(f); }
Formula all_of(std::vector<Formula> fs) { return mk_and(std::move(fs)); }
Formula any_of(std::vector<Formula> fs) { return mk_or(std::move(fs)); }
Formula imp(const Formula& a, const Formula& b) { return mk_implies(a, b); }
Formula iff(const Formula& a, const Formula& b) { return mk_iff(a, b); }
Formula conj(const Formula& a, const Formula& b) { return mk_and({a, b}); }

const char* polarity(bool pos) { return pos ? ".pos" : ".neg"; }

class Builder {
public:
    void add(std::string label, Formula f) { out.push_back({std::move(label), std::move(f)}); }
    std::vector<LabeledConjunct> out;
};

Formula integer(int k, int v) { return at(join({"I", str(k)}), {v}); }

void base_block(int m, int n, Builder& b) {
    auto p = [](int i) { return join({"p", str(i)}); };
    auto pl = [](int i, int l) { return join({"p", str(i), str(l)}); };

    std::vector<Formula> none_set;
    for (int i = 0; i < n; ++i) none_set.push_back(mk_not(at(p(i), {1})));
    b.add("zero.1", mk_forall(1, imp(integer(1, 1), iff(at("Z.1", {1}), all_of(none_set)))));

    for (int i = 0; i < n; ++i)
        for (int l = 0; l <= 2 * m - 1; ++l)
            for (bool pos : {true, false})
                b.add("inert.p" + str(i) + "." + str(l) + polarity(pos),
                      mk_forall(1, imp(conj(integer(1, 1), sgn(pos, at(p(i), {1}))),
                                       foralls(2, l + 1, sgn(pos, span_atom(pl(i, l), 1, l + 1))))));

    for (int l = 0; l <= 2 * m - 2; ++l) {
        std::vector<Formula> same;
        for (int i = 0; i < n; ++i) same.push_back(iff(span_atom(pl(i, l + 1), 1, l + 2), at(p(i), {l + 2})));
        b.add("equality.1." + str(l),
              mk_forall(1, imp(integer(1, 1),
                               foralls(2, l + 2,
                                       imp(integer(1, l + 2),
                                           iff(span_atom(join({"eq", "1", str(l)}), 1, l + 2), all_of(same)))))));
    }

    std::vector<int> ls = m > 1 ? std::vector<int>{0, 1} : std::vector<int>{0};
    for (int l : ls) {
        // binary decrement, bit by bit
        std::vector<Formula> bits;
        for (int i = 0; i < n; ++i) {
            std::vector<Formula> lower_clear, lower_set;
            for (int j = 0; j < i; ++j) {
                lower_clear.push_back(mk_not(span_atom(pl(j, l + 1), 1, l + 2)));
                lower_set.push_back(span_atom(pl(j, l + 1), 1, l + 2));
            }
            Formula mine = span_atom(pl(i, l + 1), 1, l + 2);
            bits.push_back(all_of({imp(all_of(lower_clear), iff(mine, mk_not(at(p(i), {l + 2})))),
                                   imp(any_of(lower_set), iff(mine, at(p(i), {l + 2})))}));
        }
        b.add("predecessor.1." + str(l),
              mk_forall(1, imp(integer(1, 1),
                               foralls(2, l + 2,
                                       imp(integer(1, l + 2),
                                           iff(span_atom(join({"pred", "1", str(l)}), 1, l + 2), all_of(bits)))))));
    }

    b.add("has-zero.1", mk_exists(1, conj(integer(1, 1), at("Z.1", {1}))));
    b.add("has-predecessor.1",
          mk_forall(1, imp(integer(1, 1), mk_exists(2, conj(integer(1, 2), at("pred.1.0", {1, 2}))))));
}

// Conjuncts building (k+1)-integers on top of k-integers.
void inductive_step(int m, int k, Builder& b) {
    const int k1 = k + 1;
    const int L = 2 * (m - k - 1);
    const std::vector<int> ls = k1 < m ? std::vector<int>{0, 1} : std::vector<int>{0};
    const std::string K = str(k), K1 = str(k1);
    const std::string in = "in." + K, out = "out." + K, ins = "ins." + K, outs = "outs." + K;
    const std::string zk = "Z." + K, zk1 = "Z." + K1, zinert = "Z." + K + ".1";
    auto ik = [&](int v) { return integer(k, v); };
    auto ik1 = [&](int v) { return integer(k1, v); };
    auto inl = [&](int l) { return join({"in", K, str(l)}); };
    auto insl = [&](int l) { return join({"ins", K, str(l)}); };

    for (bool pos : {true, false})
        b.add("harmony." + K + polarity(pos),
              mk_forall(1, imp(ik(1), mk_forall(2, imp(conj(ik1(2), sgn(pos, at(in, {1, 2}))),
                                                       mk_forall(3, imp(conj(ik(3), at("eq." + K + ".1", {1, 2, 3})),
                                                                        sgn(pos, at(out, {2, 3})))))))));

    b.add("zero." + K1,
          mk_forall(1, imp(ik1(1), iff(at(zk1, {1}), mk_forall(2, imp(ik(2), mk_not(at(out, {1, 2}))))))));

    for (bool pos : {true, false})
        b.add("star-harmony." + K + polarity(pos),
              mk_forall(1, imp(ik(1), mk_forall(2, imp(conj(ik1(2), sgn(pos, at(ins, {1, 2}))),
                                                       mk_forall(3, imp(conj(ik(3), at("eq." + K + ".1", {1, 2, 3})),
                                                                        sgn(pos, at(outs, {2, 3})))))))));

    for (bool pos : {true, false})
        b.add("inert-zero." + K + polarity(pos),
              mk_forall(1, imp(conj(ik(1), sgn(pos, at(zk, {1}))), mk_forall(2, sgn(pos, at(zinert, {1, 2}))))));

    b.add("star." + K,
          mk_forall(1, imp(ik(1),
                           mk_forall(2, imp(ik1(2),
                                            iff(at(ins, {1, 2}),
                                                any_of({at(zinert, {1, 2}),
                                                        mk_forall(3, imp(conj(ik(3), at("pred." + K + ".1", {1, 2, 3})),
                                                                         conj(at(outs, {2, 3}), mk_not(at(out, {2, 3})))))})))))));

    for (int l : ls)
        for (bool pos : {true, false})
            b.add("pred-inert-in." + K + "." + str(l + 2) + polarity(pos),
                  mk_forall(1, imp(ik(1), mk_forall(2, imp(conj(ik1(2), sgn(pos, at(in, {1, 2}))),
                                                           foralls(3, l + 4, sgn(pos, span_atom(inl(l + 2), 1, l + 4))))))));
    for (int l : ls)
        for (bool pos : {true, false})
            b.add("pred-inert-star." + K + "." + str(l + 2) + polarity(pos),
                  mk_forall(1, imp(ik(1), mk_forall(2, imp(conj(ik1(2), sgn(pos, at(ins, {1, 2}))),
                                                           foralls(3, l + 4, sgn(pos, span_atom(insl(l + 2), 1, l + 4))))))));

    for (int l : ls) {
        Formula star = span_atom(insl(l + 2), 1, l + 4);
        Formula bit = span_atom(inl(l + 2), 1, l + 4);
        Formula other = at(out, {l + 3, l + 4});
        Formula rho = all_of({imp(star, iff(bit, mk_not(other))), imp(mk_not(star), iff(bit, other))});
        b.add("pred-digit." + K1 + "." + str(l),
              mk_forall(1, imp(ik(1),
                               mk_forall(2, imp(ik1(2),
                                                foralls(3, l + 3,
                                                        imp(ik1(l + 3),
                                                            mk_forall(l + 4, imp(conj(ik(l + 4), span_atom(join({"eq", K, str(l + 2)}), 1, l + 4)),
                                                                                 iff(span_atom(join({"predd", K1, str(l)}), 2, l + 4), rho))))))))));
    }
    for (int l : ls)
        b.add("predecessor." + K1 + "." + str(l),
              mk_forall(1, imp(ik1(1),
                               foralls(2, l + 2,
                                       imp(ik1(l + 2),
                                           iff(span_atom(join({"pred", K1, str(l)}), 1, l + 2),
                                               mk_forall(l + 3, imp(ik(l + 3), span_atom(join({"predd", K1, str(l)}), 1, l + 3)))))))));

    b.add("has-zero." + K1, mk_exists(1, conj(ik1(1), at(zk1, {1}))));
    b.add("has-predecessor." + K1,
          mk_forall(1, imp(ik1(1), mk_exists(2, conj(ik1(2), at("pred." + K1 + ".0", {1, 2}))))));

    // in.k with l inert arguments for every l the digit conjuncts below read;
    // the list l = 0..L alone misses L+1 and L+2 once L >= 2
    std::vector<int> inert;
    for (int l = 0; l <= L; ++l) inert.push_back(l);
    for (int l = 2; l <= L + 2; ++l) {
        bool covered = l <= L || std::any_of(ls.begin(), ls.end(), [&](int x) { return x + 2 == l; });
        if (!covered) inert.push_back(l);
    }
    for (int l : inert)
        for (bool pos : {true, false})
            b.add("eq-inert-in." + K + "." + str(l) + polarity(pos),
                  mk_forall(1, imp(ik(1), mk_forall(2, imp(conj(ik1(2), sgn(pos, at(in, {1, 2}))),
                                                           foralls(3, l + 2, sgn(pos, span_atom(inl(l), 1, l + 2))))))));

    for (int l = 0; l <= L; ++l)
        b.add("eq-digit." + K1 + "." + str(l),
              mk_forall(1, imp(ik(1),
                               mk_forall(2, imp(ik1(2),
                                                foralls(3, l + 3,
                                                        imp(ik1(l + 3),
                                                            mk_forall(l + 4, imp(conj(ik(l + 4), span_atom(join({"eq", K, str(l + 2)}), 1, l + 4)),
                                                                                 iff(span_atom(join({"eqd", K1, str(l)}), 2, l + 4),
                                                                                     iff(span_atom(inl(l + 2), 1, l + 4), at(out, {l + 3, l + 4}))))))))))));
    for (int l = 0; l <= L; ++l)
        b.add("equality." + K1 + "." + str(l),
              mk_forall(1, imp(ik1(1),
                               foralls(2, l + 2,
                                       imp(ik1(l + 2),
                                           iff(span_atom(join({"eq", K1, str(l)}), 1, l + 2),
                                               mk_forall(l + 3, imp(ik(l + 3), span_atom(join({"eqd", K1, str(l)}), 1, l + 3)))))))));
}

void check_sizes(int m, int n, const GenLimits& lim) {
    if (m < 1 || n < 1) throw Error("generator parameters must be positive");
    if (m > lim.max_m || n > lim.max_n)
        throw CapExceeded("generator parameters exceed the caps m <= " + str(lim.max_m) + ", n <= " + str(lim.max_n));
}

Generated finish(Builder& b) {
    Generated g;
    std::vector<Formula> fs;
    for (const auto& c : b.out) fs.push_back(c.formula);
    g.sentence = mk_and(std::move(fs));
    g.signature = infer_signature(g.sentence);
    g.conjuncts = std::move(b.out);
    return g;
}

}  // namespace

Generated gen_phi(int m, int n, const GenLimits& lim) {
    check_sizes(m, n, lim);
    Builder b;
    base_block(m, n, b);
    for (int k = 1; k < m; ++k) inductive_step(m, k, b);
    return finish(b);
}

// ---------------------------------------------------------------------------

namespace {

bool plain_name(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    });
}

}  // namespace

void validate(const TilingSystem& t) {
    if (t.colors.empty()) throw InvalidTiling("tiling system has no colours");
    std::set<std::string> seen;
    for (const auto& c : t.colors) {
        if (!plain_name(c)) throw InvalidTiling("bad colour name '" + c + "'");
        if (!seen.insert(c).second) throw InvalidTiling("colour '" + c + "' listed twice");
    }
    if (!seen.count(t.initial)) throw InvalidTiling("initial colour '" + t.initial + "' is not a colour");
    for (const auto* rel : {&t.horizontal, &t.vertical})
        for (const auto& [c, d] : *rel)
            if (!seen.count(c) || !seen.count(d)) throw InvalidTiling("pair (" + c + "," + d + ") uses an unknown colour");
}

TilingSystem parse_tiling_system(std::string_view text) {
    TilingSystem t;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    bool have_initial = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto pct = line.find('%'); pct != std::string::npos) line.erase(pct);
        auto colon = line.find(':');
        std::istringstream words(colon == std::string::npos ? line : line.substr(colon + 1));
        std::vector<std::string> args;
        for (std::string w; words >> w;) args.push_back(w);
        if (colon == std::string::npos) {
            if (!args.empty()) throw SyntaxError("line " + str(lineno) + ": expected 'key: values'", {});
            continue;
        }
        std::string key = line.substr(0, colon);
        key.erase(std::remove_if(key.begin(), key.end(), [](unsigned char c) { return std::isspace(c); }), key.end());
        if (key == "colors" || key == "colours") {
            t.colors.insert(t.colors.end(), args.begin(), args.end());
        } else if (key == "initial") {
            if (args.size() != 1 || have_initial) throw SyntaxError("line " + str(lineno) + ": one initial colour expected", {});
            t.initial = args[0];
            have_initial = true;
        } else if (key == "h" || key == "v") {
            if (args.size() != 2) throw SyntaxError("line " + str(lineno) + ": a pair of colours expected", {});
            (key == "h" ? t.horizontal : t.vertical).insert({args[0], args[1]});
        } else {
            throw SyntaxError("line " + str(lineno) + ": unknown key '" + key + "'", {});
        }
    }
    if (!have_initial) throw SyntaxError("tiling system lacks an initial colour", {});
    validate(t);
    return t;
}

std::string render_tiling_system(const TilingSystem& t) {
    std::string out = "colors:";
    for (const auto& c : t.colors) out += " " + c;
    out += "\ninitial: " + t.initial + "\n";
    for (const auto& [c, d] : t.horizontal) out += "h: " + c + " " + d + "\n";
    for (const auto& [c, d] : t.vertical) out += "v: " + c + " " + d + "\n";
    return out;
}

void check_tiling(const TilingSystem& t, const Tiling& f) {
    validate(t);
    const int n = f.size;
    if (n < 1 || f.cells.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n))
        throw InvalidTiling("tiling has the wrong number of cells");
    std::set<std::string> colors(t.colors.begin(), t.colors.end());
    for (const auto& c : f.cells)
        if (!colors.count(c)) throw InvalidTiling("cell colour '" + c + "' is not in the system");
    if (f.at(0, 0) != t.initial) throw InvalidTiling("cell (0,0) is not the initial colour");
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            if (!t.horizontal.count({f.at(i, j), f.at((i + 1) % n, j)}))
                throw InvalidTiling("horizontal constraint fails at (" + str(i) + "," + str(j) + ")");
            if (!t.vertical.count({f.at(i, j), f.at(i, (j + 1) % n)}))
                throw InvalidTiling("vertical constraint fails at (" + str(i) + "," + str(j) + ")");
        }
}

std::optional<Tiling> find_tiling(const TilingSystem& t, int size) {
    validate(t);
    if (size < 1) throw Error("tiling size must be positive");
    if (size > 64) throw CapExceeded("tiling search is limited to 64x64 grids");
    const int n = size;
    Tiling f{n, std::vector<std::string>(static_cast<std::size_t>(n) * static_cast<std::size_t>(n))};
    std::vector<int> choice(f.cells.size(), -1);
    const int colors = static_cast<int>(t.colors.size());
    auto fits = [&](int cell) {
        const int i = cell % n, j = cell / n;
        const std::string& c = f.cells[static_cast<std::size_t>(cell)];
        if (cell == 0 && c != t.initial) return false;
        if (i > 0 && !t.horizontal.count({f.at(i - 1, j), c})) return false;
        if (j > 0 && !t.vertical.count({f.at(i, j - 1), c})) return false;
        if (i == n - 1 && !t.horizontal.count({c, f.at(0, j)})) return false;
        if (j == n - 1 && !t.vertical.count({c, f.at(i, 0)})) return false;
        return true;
    };
    int cell = 0;
    const int total = n * n;
    while (cell >= 0) {
        if (cell == total) return f;
        auto& ch = choice[static_cast<std::size_t>(cell)];
        bool placed = false;
        while (++ch < colors) {
            f.cells[static_cast<std::size_t>(cell)] = t.colors[static_cast<std::size_t>(ch)];
            if (fits(cell)) {
                placed = true;
                break;
            }
        }
        if (placed) {
            ++cell;
        } else {
            ch = -1;
            --cell;
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------

Generated gen_tiling(int m, int n, const TilingSystem& t, const GenLimits& lim) {
    check_sizes(m, n, lim);
    if (m < 2) throw Error("the tiling construction needs m >= 2");
    validate(t);
    Builder b;
    base_block(m, n, b);
    for (int k = 1; k + 1 < m; ++k) inductive_step(m, k, b);

    const int top = m - 1;
    const std::string K = str(top);
    auto ik = [&](int v) { return integer(top, v); };
    auto vtx = [](int v) { return at("vtx", {v}); };
    const std::string zinert = "Z." + K + ".1";
    const char* dims[] = {"X", "Y"};

    for (const char* D : dims)
        for (bool pos : {true, false})
            b.add(std::string("vertex.harmony.") + D + polarity(pos),
                  mk_forall(1, imp(ik(1), mk_forall(2, imp(conj(vtx(2), sgn(pos, at(std::string("in.") + D, {1, 2}))),
                                                           mk_forall(3, imp(ik(3), imp(at("eq." + K + ".1", {1, 2, 3}),
                                                                                       sgn(pos, at(std::string("out.") + D, {2, 3}))))))))));
    for (const char* D : dims)
        for (bool pos : {true, false})
            b.add(std::string("vertex.star-harmony.") + D + polarity(pos),
                  mk_forall(1, imp(ik(1), mk_forall(2, imp(conj(vtx(2), sgn(pos, at(std::string("ins.") + D, {1, 2}))),
                                                           mk_forall(3, imp(conj(ik(3), at("eq." + K + ".1", {1, 2, 3})),
                                                                            sgn(pos, at(std::string("outs.") + D, {2, 3})))))))));
    for (bool pos : {true, false})
        b.add("inert-zero." + K + polarity(pos),
              mk_forall(1, imp(conj(ik(1), sgn(pos, at("Z." + K, {1}))), mk_forall(2, sgn(pos, at(zinert, {1, 2}))))));
    for (const char* D : dims) {
        const std::string d = D;
        b.add("vertex.star." + d,
              mk_forall(1, imp(ik(1),
                               mk_forall(2, imp(vtx(2),
                                                iff(at("ins." + d, {1, 2}),
                                                    any_of({at(zinert, {1, 2}),
                                                            mk_forall(3, imp(conj(ik(3), at("pred." + K + ".1", {1, 2, 3})),
                                                                             conj(at("outs." + d, {2, 3}), mk_not(at("out." + d, {2, 3})))))})))))));
    }
    for (const char* D : dims)
        for (const char* base : {"in.", "ins."})
            for (bool pos : {true, false})
                b.add(std::string("vertex.inert-") + (base[2] == 's' ? "star." : "in.") + D + polarity(pos),
                      mk_forall(1, imp(ik(1), mk_forall(2, imp(conj(vtx(2), sgn(pos, at(base + std::string(D), {1, 2}))),
                                                               foralls(3, 4, sgn(pos, span_atom(base + std::string(D) + ".2", 1, 4))))))));
    for (const char* D : dims) {
        const std::string d = D;
        b.add("vertex.eq-digit." + d,
              mk_forall(1, imp(ik(1),
                               mk_forall(2, imp(vtx(2),
                                                mk_forall(3, imp(vtx(3),
                                                                 mk_forall(4, imp(conj(ik(4), span_atom("eq." + K + ".2", 1, 4)),
                                                                                  iff(at("eqd." + d, {2, 3, 4}),
                                                                                      iff(span_atom("in." + d + ".2", 1, 4), at("out." + d, {3, 4}))))))))))));
    }
    for (const char* D : dims) {
        const std::string d = D;
        b.add("vertex.equality." + d,
              mk_forall(1, imp(vtx(1), mk_forall(2, imp(vtx(2), iff(at("eq." + d, {1, 2}),
                                                                    mk_forall(3, imp(ik(3), at("eqd." + d, {1, 2, 3})))))))));
    }
    for (const char* D : dims) {
        const std::string d = D;
        b.add("vertex.zero." + d,
              mk_forall(1, imp(vtx(1), iff(at("Z." + d, {1}), mk_forall(2, mk_not(at("out." + d, {1, 2})))))));
    }
    for (const char* D : dims) {
        const std::string d = D;
        Formula star = span_atom("ins." + d + ".2", 1, 4);
        Formula bit = span_atom("in." + d + ".2", 1, 4);
        Formula other = at("out." + d, {3, 4});
        Formula rho = all_of({imp(star, iff(bit, mk_not(other))), imp(mk_not(star), iff(bit, other))});
        b.add("vertex.pred-digit." + d,
              mk_forall(1, imp(ik(1),
                               mk_forall(2, imp(vtx(2),
                                                mk_forall(3, imp(vtx(3),
                                                                 mk_forall(4, imp(conj(ik(4), span_atom("eq." + K + ".2", 1, 4)),
                                                                                  iff(at("predd." + d, {2, 3, 4}), rho))))))))));
    }
    for (const char* D : dims) {
        const std::string d = D;
        b.add("vertex.predecessor." + d,
              mk_forall(1, mk_forall(2, iff(at("pred." + d, {1, 2}),
                                            mk_forall(3, imp(ik(3), at("predd." + d, {1, 2, 3})))))));
    }

    b.add("vertex.origin", mk_exists(1, all_of({vtx(1), at("Z.X", {1}), at("Z.Y", {1})})));
    b.add("vertex.step.Y",
          mk_forall(1, imp(vtx(1), mk_exists(2, all_of({vtx(2), at("pred.Y", {1, 2}), at("eq.X", {1, 2})})))));
    b.add("vertex.step.X",
          mk_forall(1, imp(vtx(1), mk_exists(2, all_of({vtx(2), at("pred.X", {1, 2}), at("eq.Y", {1, 2})})))));

    auto col = [](const std::string& c, int v) { return at(color_predicate(c), {v}); };
    std::vector<Formula> some;
    for (const auto& c : t.colors) some.push_back(col(c, 1));
    b.add("colour.total", mk_forall(1, imp(vtx(1), any_of(some))));
    for (std::size_t i = 0; i < t.colors.size(); ++i)
        for (std::size_t j = i + 1; j < t.colors.size(); ++j)
            b.add("colour.disjoint." + t.colors[i] + "." + t.colors[j],
                  mk_forall(1, imp(vtx(1), mk_not(conj(col(t.colors[i], 1), col(t.colors[j], 1))))));
    for (const auto& c : t.colors)
        b.add("colour.harmony." + c,
              mk_forall(1, imp(conj(vtx(1), col(c, 1)),
                               mk_forall(2, imp(all_of({vtx(2), at("eq.X", {1, 2}), at("eq.Y", {1, 2})}), col(c, 2))))));

    b.add("tiling.initial", mk_forall(1, imp(conj(at("Z.X", {1}), at("Z.Y", {1})), col(t.initial, 1))));
    // x1 has colour d and x2 is its predecessor with colour c: (c, d) must be allowed
    for (const auto& c : t.colors)
        for (const auto& d : t.colors) {
            if (!t.horizontal.count({c, d}))
                b.add("tiling.h." + c + "." + d,
                      mk_forall(1, imp(conj(vtx(1), col(d, 1)),
                                       mk_forall(2, imp(all_of({vtx(2), at("pred.X", {1, 2}), at("eq.Y", {1, 2})}),
                                                        mk_not(col(c, 2)))))));
        }
    for (const auto& c : t.colors)
        for (const auto& d : t.colors) {
            if (!t.vertical.count({c, d}))
                b.add("tiling.v." + c + "." + d,
                      mk_forall(1, imp(conj(vtx(1), col(d, 1)),
                                       mk_forall(2, imp(all_of({vtx(2), at("pred.Y", {1, 2}), at("eq.X", {1, 2})}),
                                                        mk_not(col(c, 2)))))));
        }
    return finish(b);
}

// ---------------------------------------------------------------------------

namespace {

// Domain: the k-integer layers in order, then the vertices (row by row).
struct Layout {
    int n = 0;
    std::vector<std::uint64_t> size;   // size[k] for k = 1..layers
    std::vector<int> start;
    int layers = 0;
    int vertex_start = 0;
    std::uint64_t grid = 0;            // side of the vertex torus, 0 without vertices
    int total = 0;
    const Tiling* tiling = nullptr;

    Layout(int layers_, int n_, std::uint64_t grid_, std::uint64_t cap) : n(n_), layers(layers_), grid(grid_) {
        size.assign(static_cast<std::size_t>(layers + 1), 0);
        start.assign(static_cast<std::size_t>(layers + 1), 0);
        std::uint64_t acc = 0;
        for (int k = 1; k <= layers; ++k) {
            size[static_cast<std::size_t>(k)] = tower(k, static_cast<std::uint64_t>(n));
            start[static_cast<std::size_t>(k)] = static_cast<int>(acc);
            acc += size[static_cast<std::size_t>(k)];
            if (acc > cap) throw CapExceeded("canonical model exceeds the domain cap " + std::to_string(cap));
        }
        vertex_start = static_cast<int>(acc);
        if (grid) {
            if (grid > cap || grid * grid > cap - acc)
                throw CapExceeded("canonical model exceeds the domain cap " + std::to_string(cap));
            acc += grid * grid;
        }
        total = static_cast<int>(acc);
    }
    int layer(int e) const {
        if (e >= vertex_start) return 0;
        for (int k = layers; k >= 1; --k)
            if (e >= start[static_cast<std::size_t>(k)]) return k;
        return 0;
    }
    std::uint64_t val(int e) const { return static_cast<std::uint64_t>(e - start[static_cast<std::size_t>(layer(e))]); }
    bool is(int e, int k) const { return layer(e) == k; }
    bool vertex(int e) const { return grid && e >= vertex_start; }
    std::uint64_t coord(int e, char d) const {
        std::uint64_t c = static_cast<std::uint64_t>(e - vertex_start);
        return d == 'X' ? c % grid : c / grid;
    }
};

bool bit(std::uint64_t v, std::uint64_t i) { return i < 64 && ((v >> i) & 1U); }
bool lower_clear(std::uint64_t v, std::uint64_t i) { return i >= 64 || (v & ((std::uint64_t{1} << i) - 1)) == 0; }
std::uint64_t dec(std::uint64_t v, std::uint64_t mod) { return (v + mod - 1) % mod; }

bool numeric(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

using TupleTest = std::function<bool(const std::vector<int>&)>;

// Intended meaning of a generated predicate name.
TupleTest meaning(const Layout& lay, const std::string& name, int arity) {
    std::vector<std::string> f;
    {
        std::string cur;
        for (char c : name) {
            if (c == '.') {
                f.push_back(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
        f.push_back(cur);
    }
    auto num = [&](std::size_t i) { return std::stoi(f.at(i)); };
    const std::size_t last = static_cast<std::size_t>(arity - 1);
    const std::string& fam = f[0];
    const bool dim = f.size() >= 2 && (f[1] == "X" || f[1] == "Y");

    if (fam == "vtx") return [&lay](const std::vector<int>& t) { return lay.vertex(t[0]); };
    if (fam == "col") {
        std::string c = name.substr(4);
        return [&lay, c](const std::vector<int>& t) {
            return lay.vertex(t[0]) && lay.tiling->at(static_cast<int>(lay.coord(t[0], 'X')), static_cast<int>(lay.coord(t[0], 'Y'))) == c;
        };
    }
    if (fam == "I") {
        int k = num(1);
        return [&lay, k](const std::vector<int>& t) { return lay.is(t[0], k); };
    }
    if (fam == "Z" && dim) {
        char d = f[1][0];
        return [&lay, d](const std::vector<int>& t) { return lay.vertex(t[0]) && lay.coord(t[0], d) == 0; };
    }
    if (fam == "Z") {
        int k = num(1);
        return [&lay, k](const std::vector<int>& t) { return lay.is(t[0], k) && lay.val(t[0]) == 0; };
    }
    if (fam == "p") {
        std::uint64_t i = static_cast<std::uint64_t>(num(1));
        return [&lay, i](const std::vector<int>& t) { return lay.is(t[0], 1) && bit(lay.val(t[0]), i); };
    }
    if (dim) {
        const char d = f[1][0];
        const int top = lay.layers;
        if (fam == "in" || fam == "ins") {
            bool star = fam == "ins";
            return [&lay, d, top, star](const std::vector<int>& t) {
                if (!lay.is(t[0], top) || !lay.vertex(t[1])) return false;
                return star ? lower_clear(lay.coord(t[1], d), lay.val(t[0])) : bit(lay.coord(t[1], d), lay.val(t[0]));
            };
        }
        if (fam == "out" || fam == "outs") {
            bool star = fam == "outs";
            return [&lay, d, top, star](const std::vector<int>& t) {
                if (!lay.vertex(t[0]) || !lay.is(t[1], top)) return false;
                return star ? lower_clear(lay.coord(t[0], d), lay.val(t[1])) : bit(lay.coord(t[0], d), lay.val(t[1]));
            };
        }
        if (fam == "eq")
            return [&lay, d](const std::vector<int>& t) {
                return lay.vertex(t[0]) && lay.vertex(t[1]) && lay.coord(t[0], d) == lay.coord(t[1], d);
            };
        if (fam == "pred")
            return [&lay, d](const std::vector<int>& t) {
                return lay.vertex(t[0]) && lay.vertex(t[1]) && lay.coord(t[1], d) == dec(lay.coord(t[0], d), lay.grid);
            };
        if (fam == "eqd" || fam == "predd") {
            bool pred = fam == "predd";
            return [&lay, d, top, pred](const std::vector<int>& t) {
                if (!lay.vertex(t[0]) || !lay.vertex(t[1]) || !lay.is(t[2], top)) return false;
                std::uint64_t a = lay.val(t[2]);
                std::uint64_t from = pred ? dec(lay.coord(t[0], d), lay.grid) : lay.coord(t[0], d);
                return bit(lay.coord(t[1], d), a) == bit(from, a);
            };
        }
    } else if (f.size() >= 2 && numeric(f[1])) {
        const int k = num(1);
        if (fam == "eq" || fam == "pred") {
            bool pred = fam == "pred";
            return [&lay, k, last, pred](const std::vector<int>& t) {
                if (!lay.is(t[0], k) || !lay.is(t[last], k)) return false;
                std::uint64_t a = lay.val(t[0]), b = lay.val(t[last]);
                return pred ? b == dec(a, lay.size[static_cast<std::size_t>(k)]) : a == b;
            };
        }
        if (fam == "in" || fam == "ins")  {
            bool star = fam == "ins";
            return [&lay, k, star](const std::vector<int>& t) {
                if (!lay.is(t[0], k) || !lay.is(t[1], k + 1)) return false;
                return star ? lower_clear(lay.val(t[1]), lay.val(t[0])) : bit(lay.val(t[1]), lay.val(t[0]));
            };
        }
        if (fam == "out" || fam == "outs") {
            bool star = fam == "outs";
            return [&lay, k, star](const std::vector<int>& t) {
                if (!lay.is(t[1], k) || !lay.is(t[0], k + 1)) return false;
                return star ? lower_clear(lay.val(t[0]), lay.val(t[1])) : bit(lay.val(t[0]), lay.val(t[1]));
            };
        }
        if (fam == "eqd" || fam == "predd") {
            bool pred = fam == "predd";
            return [&lay, k, last, pred](const std::vector<int>& t) {
                if (!lay.is(t[0], k) || !lay.is(t[last - 1], k) || !lay.is(t[last], k - 1)) return false;
                std::uint64_t a = lay.val(t[last]);
                std::uint64_t from = pred ? dec(lay.val(t[0]), lay.size[static_cast<std::size_t>(k)]) : lay.val(t[0]);
                return bit(lay.val(t[last - 1]), a) == bit(from, a);
            };
        }
    }
    throw InternalInconsistency("no intended meaning for predicate '" + name + "'");
}

Structure interpret(const Layout& lay, const Signature& sig) {
    Structure s(lay.total);
    for (const auto& p : sig.predicates()) {
        Relation& r = s.declare(p.name, p.arity);
        TupleTest test = meaning(lay, p.name, p.arity);
        std::vector<int> t(static_cast<std::size_t>(p.arity), 0);
        // lexicographic order matches the dense layout
        for (std::size_t idx = 0; idx < r.bits.size(); ++idx) {
            if (test(t)) r.bits[idx] = 1;
            for (int i = p.arity - 1; i >= 0; --i) {
                if (++t[static_cast<std::size_t>(i)] < lay.total) break;
                t[static_cast<std::size_t>(i)] = 0;
            }
        }
    }
    return s;
}

}  // namespace

Structure canonical_phi_model(int m, int n, std::uint64_t domain_cap) {
    Generated g = gen_phi(m, n);
    Layout lay(m, n, 0, domain_cap);
    return interpret(lay, g.signature);
}

Structure canonical_tiling_model(int m, int n, const TilingSystem& t, const Tiling& f, std::uint64_t domain_cap) {
    check_tiling(t, f);
    const std::uint64_t side = tower(m, static_cast<std::uint64_t>(n));
    if (static_cast<std::uint64_t>(f.size) != side)
        throw InvalidTiling("tiling is " + std::to_string(f.size) + " wide, the torus needs " + std::to_string(side));
    Generated g = gen_tiling(m, n, t);
    Layout lay(m - 1, n, side, domain_cap);
    lay.tiling = &f;
    return interpret(lay, g.signature);
}

std::size_t symbol_count(const Formula& f) {
    std::string s = render_formula(f);
    std::size_t count = 0;
    bool in_token = false;
    for (char c : s) {
        bool sep = std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == ',';
        if (!sep && !in_token) ++count;
        in_token = !sep;
    }
    return count;
}

}  // namespace fluted
