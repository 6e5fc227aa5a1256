#include "reflex/dsl/parser.hpp"

#include <cctype>
#include <charconv>
#include <limits>
#include <set>
#include <vector>

namespace reflex::dsl {

ParseError::ParseError(SourceLocation w, const std::string& message)
    : std::runtime_error(std::to_string(w.line) + ":" + std::to_string(w.column) + ": " + message), where(w) {}

namespace {

enum class TokenKind { identifier, number, comma, colon, less, greater, end };

struct Token {
    TokenKind kind = TokenKind::end;
    std::string text;
    int column = 0;
};

const std::set<std::string, std::less<>> keywords = {"node", "targeting", "whenever", "priority", "of"};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

std::vector<Token> tokenize(std::string_view text, int line, int first_column) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        const int column = first_column + static_cast<int>(i);
        if (c == ' ') {
            ++i;
        } else if (c == '\t') {
            throw ParseError({line, column}, "tab characters are not allowed");
        } else if (ident_start(c)) {
            std::size_t j = i;
            while (j < text.size() && ident_char(text[j])) ++j;
            out.push_back({TokenKind::identifier, std::string(text.substr(i, j - i)), column});
            i = j;
        } else if (digit(c) || ((c == '-' || c == '+' || c == '.') && i + 1 < text.size() &&
                                (digit(text[i + 1]) || text[i + 1] == '.'))) {
            std::size_t j = i + 1;
            while (j < text.size() && (digit(text[j]) || text[j] == '.')) ++j;
            if (j < text.size() && (text[j] == 'e' || text[j] == 'E')) {
                std::size_t k = j + 1;
                if (k < text.size() && (text[k] == '-' || text[k] == '+')) ++k;
                if (k < text.size() && digit(text[k])) {
                    j = k;
                    while (j < text.size() && digit(text[j])) ++j;
                }
            }
            out.push_back({TokenKind::number, std::string(text.substr(i, j - i)), column});
            i = j;
        } else if (c == ',') {
            out.push_back({TokenKind::comma, ",", column});
            ++i;
        } else if (c == ':') {
            out.push_back({TokenKind::colon, ":", column});
            ++i;
        } else if (c == '<') {
            out.push_back({TokenKind::less, "<", column});
            ++i;
        } else if (c == '>') {
            out.push_back({TokenKind::greater, ">", column});
            ++i;
        } else {
            throw ParseError({line, column}, std::string("unexpected character '") + c + "'");
        }
    }
    out.push_back({TokenKind::end, "", first_column + static_cast<int>(text.size())});
    return out;
}

class LineParser {
public:
    LineParser(std::vector<Token> tokens, int line) : tokens_(std::move(tokens)), line_(line) {}

    bool at_keyword(std::string_view kw) const {
        return peek().kind == TokenKind::identifier && peek().text == kw;
    }

    std::string expect_name(const char* what) {
        const Token& t = peek();
        if (t.kind != TokenKind::identifier) fail(t, std::string("expected ") + what);
        if (keywords.count(t.text)) fail(t, "keyword '" + t.text + "' cannot be used as " + what);
        return next().text;
    }

    void expect(TokenKind kind, const char* what) {
        if (peek().kind != kind) fail(peek(), std::string("expected ") + what);
        next();
    }

    void expect_keyword(std::string_view kw) {
        if (!at_keyword(kw)) fail(peek(), "expected '" + std::string(kw) + "'");
        next();
    }

    void expect_end() {
        if (peek().kind != TokenKind::end) fail(peek(), "unexpected '" + peek().text + "'");
    }

    Statement statement() {
        Statement s;
        s.location = {line_, peek().column};
        s.head = expect_name("a primitive or node name");
        while (peek().kind != TokenKind::end) {
            if (peek().kind == TokenKind::comma) {
                next();
                if (peek().kind == TokenKind::end) fail(peek(), "trailing comma");
            }
            const Token& kw = peek();
            if (at_keyword("targeting")) {
                next();
                if (s.target) fail(kw, "duplicate 'targeting' clause");
                s.target = expect_name("a target name");
            } else if (at_keyword("whenever")) {
                next();
                if (s.evaluation) fail(kw, "duplicate 'whenever' clause");
                s.evaluation = evaluation();
            } else if (at_keyword("priority")) {
                next();
                if (seen_priority_) fail(kw, "duplicate 'priority' clause");
                seen_priority_ = true;
                expect_keyword("of");
                s.priority = priority();
            } else {
                fail(kw, "expected 'targeting', 'whenever' or 'priority', found '" + kw.text + "'");
            }
        }
        return s;
    }

private:
    const Token& peek() const { return tokens_[pos_]; }
    const Token& next() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

    [[noreturn]] void fail(const Token& t, const std::string& message) const {
        throw ParseError({line_, t.column}, message);
    }

    double number() {
        const Token& t = peek();
        if (t.kind != TokenKind::number) fail(t, "expected a number");
        const std::string& text = t.text;
        const char* first = text.data() + (text[0] == '+' ? 1 : 0);
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(first, text.data() + text.size(), value);
        if (ec != std::errc() || ptr != text.data() + text.size()) fail(t, "malformed number '" + text + "'");
        next();
        return value;
    }

    int priority() {
        const Token& t = peek();
        if (t.kind != TokenKind::number) fail(t, "malformed priority: expected a non-negative integer");
        int value = 0;
        auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
        if (ec != std::errc() || ptr != t.text.data() + t.text.size() || value < 0) {
            fail(t, "malformed priority '" + t.text + "': expected a non-negative integer");
        }
        next();
        return value;
    }

    EvalExpr evaluation() {
        const Token& start = peek();
        if (start.kind == TokenKind::number) {
            const double lower = number();
            expect(TokenKind::less, "'<' in a band evaluation");
            std::string feature = expect_name("a feature name");
            expect(TokenKind::less, "'<' in a band evaluation");
            const double upper = number();
            if (!(lower < upper)) fail(start, "band evaluation needs lower < upper");
            return Band{std::move(feature), lower, upper};
        }
        std::string name = expect_name("an evaluation");
        if (peek().kind == TokenKind::less || peek().kind == TokenKind::greater) {
            const Comparison op = peek().kind == TokenKind::less ? Comparison::less : Comparison::greater;
            next();
            return Threshold{std::move(name), op, number()};
        }
        return NamedEval{std::move(name)};
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    int line_;
    bool seen_priority_ = false;
};

}  // namespace

ScriptAst parse_script(std::string_view source) {
    ScriptAst ast;
    std::optional<NodeDef> open;
    int body_indent = -1;

    auto close_node = [&] {
        if (!open) return;
        if (open->body.empty()) throw ParseError(open->location, "node '" + open->name + "' has an empty body");
        ast.nodes.push_back(std::move(*open));
        open.reset();
        body_indent = -1;
    };

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= source.size()) {
        const std::size_t eol = source.find('\n', pos);
        std::string_view line = source.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? source.size() + 1 : eol + 1;
        ++line_no;

        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);

        std::size_t indent = 0;
        while (indent < line.size() && (line[indent] == ' ' || line[indent] == '\t')) {
            if (line[indent] == '\t') {
                throw ParseError({line_no, static_cast<int>(indent) + 1}, "tab characters are not allowed");
            }
            ++indent;
        }
        std::string_view content = line.substr(indent);
        while (!content.empty() && content.back() == ' ') content.remove_suffix(1);
        if (content.empty()) continue;

        const int column = static_cast<int>(indent) + 1;
        LineParser parser(tokenize(content, line_no, column), line_no);

        if (indent == 0) {
            close_node();
            if (parser.at_keyword("node")) {
                NodeDef def;
                def.location = {line_no, column};
                parser.expect_keyword("node");
                def.name = parser.expect_name("a node name");
                parser.expect(TokenKind::colon, "':' after the node name");
                parser.expect_end();
                if (ast.find_node(def.name)) {
                    throw ParseError(def.location, "duplicate node name '" + def.name + "'");
                }
                open = std::move(def);
                continue;
            }
            ast.statements.push_back(parser.statement());
            continue;
        }

        if (!open) throw ParseError({line_no, column}, "unexpected indentation outside a node body");
        if (body_indent < 0) body_indent = static_cast<int>(indent);
        if (static_cast<int>(indent) != body_indent) {
            throw ParseError({line_no, column}, "inconsistent indentation in body of node '" + open->name + "'");
        }
        if (parser.at_keyword("node")) throw ParseError({line_no, column}, "node definitions cannot be nested");
        open->body.push_back(parser.statement());
    }
    close_node();
    return ast;
}

}  // namespace reflex::dsl
