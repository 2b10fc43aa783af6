#include "evtms/problem.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <set>

namespace evtms {

std::string Prop::text() const {
    std::string out = "(";
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += relation ? std::string(" ") + relation + " " : " ";
        out += parts[i];
    }
    return out + ")";
}

bool ProblemAst::same_structure(const ProblemAst& other) const {
    if (statements.size() != other.statements.size()) return false;
    for (std::size_t i = 0; i < statements.size(); ++i) {
        if (statements[i].value != other.statements[i].value) return false;
    }
    return true;
}

namespace {

enum class Tok {
    lparen,
    rparen,
    lbracket,
    rbracket,
    comma,
    colon,
    implied_by,  // ":-"
    iff,         // "<->"
    amp,
    relation,  // '<' '=' '>'
    ident,
    number,
    end,
};

const char* tok_name(Tok t) {
    switch (t) {
        case Tok::lparen: return "'('";
        case Tok::rparen: return "')'";
        case Tok::lbracket: return "'['";
        case Tok::rbracket: return "']'";
        case Tok::comma: return "','";
        case Tok::colon: return "':'";
        case Tok::implied_by: return "':-'";
        case Tok::iff: return "'<->'";
        case Tok::amp: return "'&'";
        case Tok::relation: return "comparison operator";
        case Tok::ident: return "identifier";
        case Tok::number: return "number";
        case Tok::end: return "end of input";
    }
    return "?";
}

struct Token {
    Tok type;
    std::string text;
    double value = 0.0;
    int line = 1;
    int column = 1;
};

bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

std::vector<Token> lex(std::string_view text) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (text[i + k] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        i += n;
    };
    while (i < text.size()) {
        char c = text[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            advance(1);
            continue;
        }
        if (c == '%') {
            while (i < text.size() && text[i] != '\n') advance(1);
            continue;
        }
        Token tok;
        tok.line = line;
        tok.column = col;
        if (c == '(') {
            tok.type = Tok::lparen;
            advance(1);
        } else if (c == ')') {
            tok.type = Tok::rparen;
            advance(1);
        } else if (c == '[') {
            tok.type = Tok::lbracket;
            advance(1);
        } else if (c == ']') {
            tok.type = Tok::rbracket;
            advance(1);
        } else if (c == ',') {
            tok.type = Tok::comma;
            advance(1);
        } else if (text.compare(i, 3, "<->") == 0) {
            tok.type = Tok::iff;
            advance(3);
        } else if (text.compare(i, 2, ":-") == 0) {
            tok.type = Tok::implied_by;
            advance(2);
        } else if (c == ':') {
            tok.type = Tok::colon;
            advance(1);
        } else if (c == '&') {
            tok.type = Tok::amp;
            advance(1);
        } else if (c == '<' || c == '=' || c == '>') {
            tok.type = Tok::relation;
            tok.text = c;
            advance(1);
        } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t start = i;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) advance(1);
            bool digits_before = i > start;
            if (i < text.size() && text[i] == '/' && digits_before) {
                advance(1);
                std::size_t den_start = i;
                while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) advance(1);
                if (i == den_start) {
                    throw ParseError(tok.line, tok.column, "malformed fraction", {"number"});
                }
                tok.text = std::string(text.substr(start, i - start));
                double num = 0, den = 0;
                auto slash = tok.text.find('/');
                std::from_chars(tok.text.data(), tok.text.data() + slash, num);
                std::from_chars(tok.text.data() + slash + 1, tok.text.data() + tok.text.size(), den);
                if (den == 0) {
                    throw ParseError(tok.line, tok.column, "fraction with zero denominator");
                }
                tok.value = num / den;
            } else {
                if (i < text.size() && text[i] == '.') {
                    advance(1);
                    std::size_t frac_start = i;
                    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) advance(1);
                    if (!digits_before && i == frac_start) {
                        throw ParseError(tok.line, tok.column, "malformed number", {"number"});
                    }
                }
                tok.text = std::string(text.substr(start, i - start));
                std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), tok.value);
            }
            tok.type = Tok::number;
        } else if (ident_start(c)) {
            std::size_t start = i;
            while (i < text.size() && ident_char(text[i])) advance(1);
            tok.type = Tok::ident;
            tok.text = std::string(text.substr(start, i - start));
        } else {
            throw ParseError(line, col, std::string("unexpected character '") + c + "'");
        }
        out.push_back(std::move(tok));
    }
    Token eof;
    eof.type = Tok::end;
    eof.line = line;
    eof.column = col;
    out.push_back(eof);
    return out;
}

class Parser {
public:
    explicit Parser(std::string_view text) : toks_(lex(text)) {}

    ProblemAst parse() {
        ProblemAst ast;
        while (peek().type != Tok::end) {
            ast.statements.push_back(statement());
        }
        analyze(ast);
        return ast;
    }

private:
    const Token& peek(std::size_t k = 0) const {
        std::size_t i = std::min(pos_ + k, toks_.size() - 1);
        return toks_[i];
    }
    const Token& take() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

    [[noreturn]] void fail(const Token& at, const std::string& msg,
                           std::vector<std::string> expected = {}) const {
        throw ParseError(at.line, at.column, msg, std::move(expected));
    }

    const Token& expect(Tok type) {
        const Token& t = peek();
        if (t.type != type) {
            fail(t, std::string("unexpected ") + tok_name(t.type), {tok_name(type)});
        }
        return take();
    }

    Prop prop() {
        const Token& open = expect(Tok::lparen);
        Prop p;
        const Token& first = peek();
        if (first.type != Tok::ident) {
            fail(first, std::string("unexpected ") + tok_name(first.type), {"identifier"});
        }
        p.parts.push_back(take().text);
        if (peek().type == Tok::relation) {
            p.relation = take().text[0];
            const Token& rhs = peek();
            if (rhs.type != Tok::ident) {
                fail(rhs, std::string("unexpected ") + tok_name(rhs.type), {"identifier"});
            }
            p.parts.push_back(take().text);
            expect(Tok::rparen);
            return p;
        }
        while (peek().type == Tok::ident) p.parts.push_back(take().text);
        if (peek().type != Tok::rparen) {
            fail(peek(), std::string("unexpected ") + tok_name(peek().type), {"identifier", "')'"});
        }
        take();
        (void)open;
        return p;
    }

    SupportPair pair() {
        const Token& open = expect(Tok::lbracket);
        const Token& lo = expect(Tok::number);
        expect(Tok::comma);
        const Token& hi = expect(Tok::number);
        expect(Tok::rbracket);
        if (lo.value < 0.0 || lo.value > 1.0 || hi.value < 0.0 || hi.value > 1.0) {
            fail(open, "support values must lie in [0, 1]");
        }
        if (lo.value > hi.value) {
            fail(open, "support pair lower bound exceeds upper bound");
        }
        return {lo.value, hi.value};
    }

    Statement statement() {
        const Token& start = peek();
        if (start.type != Tok::lparen) {
            fail(start, std::string("unexpected ") + tok_name(start.type), {"'('"});
        }
        Statement stmt;
        stmt.span = {start.line, start.column};

        if (peek(1).type == Tok::ident && peek(1).text == "one-of") {
            take();  // (
            take();  // one-of
            OneOfStmt oneof;
            while (peek().type == Tok::lparen) {
                Prop member = prop();
                for (const auto& existing : oneof.members) {
                    if (existing == member) {
                        fail(start, "duplicate one-of member " + member.text());
                    }
                }
                oneof.members.push_back(std::move(member));
            }
            if (oneof.members.empty()) {
                fail(peek(), std::string("unexpected ") + tok_name(peek().type), {"'('"});
            }
            expect(Tok::rparen);
            stmt.value = std::move(oneof);
            return stmt;
        }

        Prop first = prop();
        const Token& next = peek();
        switch (next.type) {
            case Tok::colon: {
                take();
                stmt.value = EvidenceStmt{std::move(first), pair()};
                return stmt;
            }
            case Tok::implied_by: {
                take();
                RuleStmt rule;
                rule.head = std::move(first);
                rule.body.push_back(prop());
                while (peek().type == Tok::amp) {
                    take();
                    rule.body.push_back(prop());
                }
                expect(Tok::colon);
                rule.strength = pair();
                stmt.value = std::move(rule);
                return stmt;
            }
            case Tok::amp:
            case Tok::iff: {
                BicondStmt bicond;
                bicond.body.push_back(std::move(first));
                while (peek().type == Tok::amp) {
                    take();
                    bicond.body.push_back(prop());
                }
                expect(Tok::iff);
                bicond.head = prop();
                stmt.value = std::move(bicond);
                return stmt;
            }
            default:
                fail(next, std::string("unexpected ") + tok_name(next.type),
                     {"':'", "':-'", "'&'", "'<->'"});
        }
    }

    // flag rule-body propositions that belong to no one-of and have no
    // evidence anywhere in the program
    static void analyze(ProblemAst& ast) {
        std::set<std::string> known;
        for (const auto& stmt : ast.statements) {
            if (const auto* o = std::get_if<OneOfStmt>(&stmt.value)) {
                for (const auto& m : o->members) known.insert(m.text());
            } else if (const auto* e = std::get_if<EvidenceStmt>(&stmt.value)) {
                known.insert(e->prop.text());
            }
        }
        for (const auto& stmt : ast.statements) {
            if (const auto* r = std::get_if<RuleStmt>(&stmt.value)) {
                for (const auto& b : r->body) {
                    if (!known.count(b.text())) {
                        ast.warnings.push_back(std::to_string(stmt.span.line) + ":" +
                                               std::to_string(stmt.span.column) + ": rule body " +
                                               b.text() +
                                               " has no one-of membership and no evidence");
                    }
                }
            }
        }
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

std::string shortest(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string pair_text(const SupportPair& p) {
    return "[" + shortest(p.lower) + ", " + shortest(p.upper) + "]";
}

std::string conj_text(const std::vector<Prop>& props) {
    std::string out;
    for (std::size_t i = 0; i < props.size(); ++i) {
        if (i) out += " & ";
        out += props[i].text();
    }
    return out;
}

}  // namespace

ProblemAst parse_problem(std::string_view text) {
    return Parser(text).parse();
}

std::string pretty_print(const ProblemAst& ast) {
    std::string out;
    for (const auto& stmt : ast.statements) {
        if (const auto* o = std::get_if<OneOfStmt>(&stmt.value)) {
            out += "(one-of";
            for (const auto& m : o->members) out += " " + m.text();
            out += ")";
        } else if (const auto* e = std::get_if<EvidenceStmt>(&stmt.value)) {
            out += e->prop.text() + ": " + pair_text(e->pair);
        } else if (const auto* r = std::get_if<RuleStmt>(&stmt.value)) {
            out += r->head.text() + " :- " + conj_text(r->body) + ": " + pair_text(r->strength);
        } else if (const auto* b = std::get_if<BicondStmt>(&stmt.value)) {
            out += conj_text(b->body) + " <-> " + b->head.text();
        }
        out += "\n";
    }
    return out;
}

CompiledProblem compile(const ProblemAst& ast) {
    CompiledProblem out;
    out.warnings = ast.warnings;
    Database& db = out.db;

    auto describe = [](std::size_t index, const Statement& stmt) {
        return "statement " + std::to_string(index + 1) + " (line " +
               std::to_string(stmt.span.line) + ")";
    };

    // member text -> owning disjunction
    std::map<std::string, DisjunctionId> member_of;

    // one-of declarations first: later statements may reference frames that
    // appear further down in the file
    for (std::size_t i = 0; i < ast.statements.size(); ++i) {
        const auto* oneof = std::get_if<OneOfStmt>(&ast.statements[i].value);
        if (!oneof) continue;
        std::vector<NodeId> hyps;
        for (const auto& member : oneof->members) {
            std::string text = member.text();
            if (member_of.count(text)) {
                throw CompileError(describe(i, ast.statements[i]) + ": " + text +
                                   " already belongs to a one-of");
            }
            db.core().create_assumption(1.0, Origin::plain, text);
            hyps.push_back(db.node(text));
        }
        DisjunctionId did;
        try {
            did = db.core().declare_one_of(hyps);
        } catch (const StructuralError& e) {
            throw CompileError(describe(i, ast.statements[i]) + ": " + e.what());
        }
        for (const auto& member : oneof->members) member_of.emplace(member.text(), did);
    }

    for (std::size_t i = 0; i < ast.statements.size(); ++i) {
        const Statement& stmt = ast.statements[i];
        if (const auto* e = std::get_if<EvidenceStmt>(&stmt.value)) {
            db.assert_evidence(db.node(e->prop.text()), e->pair);
        } else if (const auto* r = std::get_if<RuleStmt>(&stmt.value)) {
            std::vector<NodeId> body;
            for (const auto& b : r->body) body.push_back(db.node(b.text()));
            db.add_rule(std::move(body), db.node(r->head.text()), r->strength);
        } else if (const auto* b = std::get_if<BicondStmt>(&stmt.value)) {
            auto head_it = member_of.find(b->head.text());
            if (head_it == member_of.end()) {
                throw CompileError(describe(i, stmt) + ": biconditional head " + b->head.text() +
                                   " is not a one-of member");
            }
            const Disjunction& head_d = db.core().disjunctions()[head_it->second];
            if (head_d.members.size() != 2) {
                throw CompileError(describe(i, stmt) + ": biconditional head " + b->head.text() +
                                   " must belong to a two-member one-of");
            }
            NodeId head_node = db.node(b->head.text());
            NodeId opposite = Atms::false_node;
            for (AssumptionId a : head_d.members) {
                NodeId h = db.core().assumptions()[a].hypothesis;
                if (h != head_node) opposite = h;
            }
            std::vector<NodeId> body;
            for (const auto& c : b->body) {
                if (!member_of.count(c.text())) {
                    throw CompileError(describe(i, stmt) + ": biconditional conjunct " + c.text() +
                                       " is not a one-of member");
                }
                body.push_back(db.node(c.text()));
            }
            db.core().add_justification(body, head_node, "equivalence");
            // a falsified conjunct forces the opposite state
            for (const auto& c : b->body) {
                const Disjunction& d = db.core().disjunctions()[member_of.at(c.text())];
                NodeId c_node = db.node(c.text());
                for (AssumptionId a : d.members) {
                    NodeId sibling = db.core().assumptions()[a].hypothesis;
                    if (sibling != c_node) {
                        db.core().add_justification({sibling}, opposite, "equivalence");
                    }
                }
            }
            if (std::find(out.head_disjunctions.begin(), out.head_disjunctions.end(),
                          head_it->second) == out.head_disjunctions.end()) {
                out.head_disjunctions.push_back(head_it->second);
            }
        }
    }
    std::sort(out.head_disjunctions.begin(), out.head_disjunctions.end());
    return out;
}

}  // namespace evtms
