#include "hubeval/call_parser.hpp"

#include "hubeval/common.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <regex>

namespace hubeval {

namespace {

enum class Tok { Name, String, Number, Op, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;  // decoded content for strings, spelling otherwise
    std::size_t begin = 0;
    std::size_t end = 0;
    double number = 0.0;
    bool number_ok = false;
};

constexpr std::array<std::string_view, 32> kKeywords = {
    "and",    "as",     "assert", "async",  "await",   "break",  "class",    "continue",
    "def",    "del",    "elif",   "else",   "except",  "finally", "for",     "from",
    "global", "if",     "import", "in",     "is",      "lambda", "nonlocal", "not",
    "or",     "pass",   "raise",  "return", "try",     "while",  "with",     "yield",
};

bool is_keyword(std::string_view name) {
    return std::find(kKeywords.begin(), kKeywords.end(), name) != kKeywords.end();
}

bool is_name_start(char c) {
    const auto u = static_cast<unsigned char>(c);
    return std::isalpha(u) || c == '_' || u >= 0x80;
}

bool is_name_char(char c) {
    return is_name_start(c) || std::isdigit(static_cast<unsigned char>(c));
}

bool is_string_prefix(std::string_view name) {
    const std::string lower = to_lower(name);
    return lower == "r" || lower == "b" || lower == "u" || lower == "f" || lower == "rb" ||
           lower == "br" || lower == "fr" || lower == "rf";
}

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
            } else if (is_name_start(c)) {
                lex_name(out);
            } else if (c == '\'' || c == '"') {
                lex_string(out, pos_, pos_, false);
            } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                       (c == '.' && pos_ + 1 < src_.size() &&
                        std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
                lex_number(out);
            } else {
                lex_op(out);
            }
        }
        Token end;
        end.begin = end.end = src_.size();
        out.push_back(end);
        return out;
    }

private:
    void lex_name(std::vector<Token>& out) {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && is_name_char(src_[pos_])) ++pos_;
        const std::string_view name = src_.substr(start, pos_ - start);
        if (pos_ < src_.size() && (src_[pos_] == '\'' || src_[pos_] == '"') &&
            is_string_prefix(name)) {
            const bool raw = name.find_first_of("rR") != std::string_view::npos;
            lex_string(out, start, pos_, raw);
            return;
        }
        out.push_back(Token{Tok::Name, std::string(name), start, pos_});
    }

    // `token_start` includes any prefix; `quote_pos` is the opening quote.
    void lex_string(std::vector<Token>& out, std::size_t token_start, std::size_t quote_pos,
                    bool raw) {
        const char q = src_[quote_pos];
        const bool triple = src_.substr(quote_pos, 3) == std::string(3, q);
        std::size_t i = quote_pos + (triple ? 3 : 1);
        std::string content;
        while (i < src_.size()) {
            const char c = src_[i];
            if (triple && src_.substr(i, 3) == std::string(3, q)) {
                pos_ = i + 3;
                out.push_back(Token{Tok::String, std::move(content), token_start, pos_});
                return;
            }
            if (!triple && c == q) {
                pos_ = i + 1;
                out.push_back(Token{Tok::String, std::move(content), token_start, pos_});
                return;
            }
            if (!triple && c == '\n') break;
            if (c == '\\' && i + 1 < src_.size()) {
                const char n = src_[i + 1];
                if (raw) {
                    content.push_back(c);
                    content.push_back(n);
                } else {
                    switch (n) {
                    case 'n': content.push_back('\n'); break;
                    case 't': content.push_back('\t'); break;
                    case 'r': content.push_back('\r'); break;
                    case '\\': content.push_back('\\'); break;
                    case '\'': content.push_back('\''); break;
                    case '"': content.push_back('"'); break;
                    case '\n': break;
                    default:
                        content.push_back(c);
                        content.push_back(n);
                    }
                }
                i += 2;
                continue;
            }
            content.push_back(c);
            ++i;
        }
        // Unterminated: the quote is a stray character (an apostrophe in prose).
        out.push_back(Token{Tok::Op, std::string(1, q), quote_pos, quote_pos + 1});
        if (token_start != quote_pos) {
            // Prefix letters already consumed as part of a name-like word.
            out.insert(out.end() - 1, Token{Tok::Name, std::string(src_.substr(token_start,
                                                                             quote_pos - token_start)),
                                            token_start, quote_pos});
        }
        pos_ = quote_pos + 1;
    }

    void lex_number(std::vector<Token>& out) {
        const std::size_t start = pos_;
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.') {
                ++pos_;
            } else if ((c == '+' || c == '-') && (src_[pos_ - 1] == 'e' || src_[pos_ - 1] == 'E')) {
                ++pos_;
            } else {
                break;
            }
        }
        Token t{Tok::Number, std::string(src_.substr(start, pos_ - start)), start, pos_};
        std::string digits;
        for (char c : t.text) {
            if (c != '_') digits.push_back(c);
        }
        double v = 0.0;
        const auto res = std::from_chars(digits.data(), digits.data() + digits.size(), v);
        t.number_ok = res.ec == std::errc{} && res.ptr == digits.data() + digits.size();
        t.number = v;
        out.push_back(std::move(t));
    }

    void lex_op(std::vector<Token>& out) {
        static constexpr std::array<std::string_view, 8> kTwoChar = {"==", "!=", "<=", ">=",
                                                                     "->", ":=", "**", "//"};
        const std::string_view two = src_.substr(pos_, 2);
        for (auto op : kTwoChar) {
            if (two == op) {
                out.push_back(Token{Tok::Op, std::string(op), pos_, pos_ + 2});
                pos_ += 2;
                return;
            }
        }
        out.push_back(Token{Tok::Op, std::string(1, src_[pos_]), pos_, pos_ + 1});
        ++pos_;
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

class Parser {
public:
    Parser(std::string_view src, std::vector<Token> toks) : src_(src), toks_(std::move(toks)) {}

    std::vector<CallNode> scan() {
        std::vector<CallNode> out;
        std::size_t i = 0;
        while (toks_[i].kind != Tok::End) {
            if (!starts_path(i)) {
                ++i;
                continue;
            }
            std::size_t j = i;
            std::vector<std::string> path = read_path(j);
            if (is_op(j, "(")) {
                std::size_t k = j;
                if (auto call = parse_call(std::move(path), k)) {
                    out.push_back(std::move(*call));
                    i = skip_chain(k);
                    continue;
                }
            }
            i = j;
        }
        return out;
    }

private:
    bool is_op(std::size_t i, std::string_view op) const {
        return toks_[i].kind == Tok::Op && toks_[i].text == op;
    }

    bool starts_path(std::size_t i) const {
        if (toks_[i].kind != Tok::Name || is_keyword(toks_[i].text)) return false;
        if (i == 0) return true;
        const Token& prev = toks_[i - 1];
        if (prev.kind == Tok::Op && prev.text == ".") return false;
        if (prev.kind == Tok::Name && (prev.text == "def" || prev.text == "class")) return false;
        return true;
    }

    // Name ('.' Name)*; `i` must point at a Name.
    std::vector<std::string> read_path(std::size_t& i) const {
        std::vector<std::string> path{toks_[i].text};
        ++i;
        while (is_op(i, ".") && toks_[i + 1].kind == Tok::Name && !is_keyword(toks_[i + 1].text)) {
            path.push_back(toks_[i + 1].text);
            i += 2;
        }
        return path;
    }

    // Skips a balanced group starting at an opener; returns the index past its closer,
    // or the End index if unbalanced.
    std::size_t skip_group(std::size_t i) const {
        int depth = 0;
        while (toks_[i].kind != Tok::End) {
            if (toks_[i].kind == Tok::Op) {
                const std::string& t = toks_[i].text;
                if (t == "(" || t == "[" || t == "{") ++depth;
                if (t == ")" || t == "]" || t == "}") {
                    --depth;
                    if (depth == 0) return i + 1;
                }
            }
            ++i;
        }
        return i;
    }

    // `.method(...)`, `[...]`, `(...)` trailing a recognised call are not separate calls.
    std::size_t skip_chain(std::size_t i) const {
        for (;;) {
            if (is_op(i, ".") && toks_[i + 1].kind == Tok::Name) {
                i += 2;
            } else if (is_op(i, "(") || is_op(i, "[")) {
                i = skip_group(i);
            } else {
                return i;
            }
        }
    }

    // `i` points at '('. On success `i` is left just past ')'.
    std::optional<CallNode> parse_call(std::vector<std::string> path, std::size_t& i) const {
        CallNode call;
        call.callee = std::move(path);
        std::size_t k = i + 1;
        while (!is_op(k, ")")) {
            if (toks_[k].kind == Tok::End) return std::nullopt;
            std::optional<std::string> kw;
            if (toks_[k].kind == Tok::Name && !is_keyword(toks_[k].text) && is_op(k + 1, "=")) {
                kw = toks_[k].text;
                k += 2;
            }
            auto value = parse_expr(k, ")");
            if (!value) return std::nullopt;
            if (kw) {
                if (call.keyword_value(*kw) != nullptr) return std::nullopt;
                call.keyword.push_back(KeywordArg{std::move(*kw), std::move(*value)});
            } else {
                call.positional.push_back(std::move(*value));
            }
            if (is_op(k, ",")) {
                ++k;
            } else if (!is_op(k, ")")) {
                return std::nullopt;
            }
        }
        i = k + 1;
        return call;
    }

    bool at_terminator(std::size_t i, std::string_view closer) const {
        return toks_[i].kind == Tok::End || is_op(i, ",") || is_op(i, closer);
    }

    // An argument or list item, ending before ',' or `closer` at depth 0.
    std::optional<Value> parse_expr(std::size_t& i, std::string_view closer) const {
        const std::size_t start = i;
        std::size_t k = i;
        if (auto simple = parse_simple(k); simple && at_terminator(k, closer) &&
                                           toks_[k].kind != Tok::End) {
            i = k;
            return simple;
        }
        // Opaque expression: keep its raw text.
        k = start;
        int depth = 0;
        while (toks_[k].kind != Tok::End) {
            if (toks_[k].kind == Tok::Op) {
                const std::string& t = toks_[k].text;
                if (depth == 0 && (t == "," || t == closer)) break;
                if (t == "(" || t == "[" || t == "{") ++depth;
                if (t == ")" || t == "]" || t == "}") {
                    if (depth == 0) return std::nullopt;
                    --depth;
                }
            }
            ++k;
        }
        if (toks_[k].kind == Tok::End || k == start) return std::nullopt;
        const std::size_t b = toks_[start].begin;
        const std::size_t e = toks_[k - 1].end;
        i = k;
        return make_identifier(trim(src_.substr(b, e - b)));
    }

    std::optional<Value> parse_simple(std::size_t& i) const {
        const Token& t = toks_[i];
        switch (t.kind) {
        case Tok::String: {
            std::string text;
            while (toks_[i].kind == Tok::String) {
                text += toks_[i].text;
                ++i;
            }
            return make_string(std::move(text));
        }
        case Tok::Number:
            if (!t.number_ok) return std::nullopt;
            ++i;
            return make_number(t.number);
        case Tok::Op:
            if ((t.text == "-" || t.text == "+") && toks_[i + 1].kind == Tok::Number &&
                toks_[i + 1].number_ok) {
                const double v = toks_[i + 1].number;
                i += 2;
                return make_number(t.text == "-" ? -v : v);
            }
            if (t.text == "[") return parse_list(i);
            return std::nullopt;
        case Tok::Name: {
            if (t.text == "True" || t.text == "False") {
                ++i;
                return make_bool(t.text == "True");
            }
            if (is_keyword(t.text)) return std::nullopt;
            std::vector<std::string> path = read_path(i);
            if (is_op(i, "(")) {
                auto call = parse_call(std::move(path), i);
                if (!call) return std::nullopt;
                return make_call(std::move(*call));
            }
            std::string dotted = path.front();
            for (std::size_t p = 1; p < path.size(); ++p) dotted += "." + path[p];
            return make_identifier(std::move(dotted));
        }
        case Tok::End: return std::nullopt;
        }
        return std::nullopt;
    }

    std::optional<Value> parse_list(std::size_t& i) const {
        std::size_t k = i + 1;
        std::vector<Value> items;
        while (!is_op(k, "]")) {
            auto item = parse_expr(k, "]");
            if (!item) return std::nullopt;
            items.push_back(std::move(*item));
            if (is_op(k, ",")) {
                ++k;
            } else if (!is_op(k, "]")) {
                return std::nullopt;
            }
        }
        i = k + 1;
        return make_list(std::move(items));
    }

    std::string_view src_;
    std::vector<Token> toks_;
};

std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string quote(std::string_view text) {
    std::string out = "'";
    for (char c : text) {
        switch (c) {
        case '\\': out += "\\\\"; break;
        case '\'': out += "\\'"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\r': out += "\\r"; break;
        default: out.push_back(c);
        }
    }
    out.push_back('\'');
    return out;
}

}  // namespace

std::string CallNode::callee_path() const {
    std::string out;
    for (const auto& seg : callee) {
        if (!out.empty()) out.push_back('.');
        out += seg;
    }
    return out;
}

const Value* CallNode::keyword_value(std::string_view name) const {
    for (const auto& kw : keyword) {
        if (kw.name == name) return &kw.value;
    }
    return nullptr;
}

Value make_string(std::string text) { return Value{StringLit{std::move(text)}}; }
Value make_number(double value) { return Value{NumberLit{value}}; }
Value make_bool(bool value) { return Value{BoolLit{value}}; }
Value make_identifier(std::string name) { return Value{Identifier{std::move(name)}}; }
Value make_call(CallNode call) { return Value{Box<CallNode>(std::move(call))}; }
Value make_list(std::vector<Value> items) { return Value{ListLit{std::move(items)}}; }

bool operator==(const KeywordArg& a, const KeywordArg& b) {
    return a.name == b.name && a.value == b.value;
}

bool operator==(const CallNode& a, const CallNode& b) {
    return a.callee == b.callee && a.positional == b.positional && a.keyword == b.keyword;
}

bool operator==(const Value& a, const Value& b) {
    if (a.node.index() != b.node.index()) return false;
    return std::visit(
        [&](const auto& lhs) -> bool {
            using T = std::decay_t<decltype(lhs)>;
            const T& rhs = std::get<T>(b.node);
            if constexpr (std::is_same_v<T, StringLit>) return lhs.text == rhs.text;
            if constexpr (std::is_same_v<T, NumberLit>) return lhs.value == rhs.value;
            if constexpr (std::is_same_v<T, BoolLit>) return lhs.value == rhs.value;
            if constexpr (std::is_same_v<T, Identifier>) return lhs.name == rhs.name;
            if constexpr (std::is_same_v<T, Box<CallNode>>) return *lhs == *rhs;
            if constexpr (std::is_same_v<T, ListLit>) return lhs.items == rhs.items;
            return false;
        },
        a.node);
}

bool values_match(const Value& a, const Value& b) {
    if (a.node.index() != b.node.index()) return false;
    if (const auto* s = a.as<StringLit>()) return trim(s->text) == trim(b.as<StringLit>()->text);
    if (const auto* n = a.as<NumberLit>()) return n->value == b.as<NumberLit>()->value;
    if (const auto* f = a.as<BoolLit>()) return f->value == b.as<BoolLit>()->value;
    if (const auto* id = a.as<Identifier>()) return trim(id->name) == trim(b.as<Identifier>()->name);
    if (const auto* l = a.as<ListLit>()) {
        const auto& other = b.as<ListLit>()->items;
        if (l->items.size() != other.size()) return false;
        for (std::size_t i = 0; i < other.size(); ++i) {
            if (!values_match(l->items[i], other[i])) return false;
        }
        return true;
    }
    const CallNode& x = **a.as<Box<CallNode>>();
    const CallNode& y = **b.as<Box<CallNode>>();
    if (x.callee != y.callee || x.positional.size() != y.positional.size() ||
        x.keyword.size() != y.keyword.size()) {
        return false;
    }
    for (std::size_t i = 0; i < x.positional.size(); ++i) {
        if (!values_match(x.positional[i], y.positional[i])) return false;
    }
    for (const auto& kw : x.keyword) {
        const Value* other = y.keyword_value(kw.name);
        if (other == nullptr || !values_match(kw.value, *other)) return false;
    }
    return true;
}

std::vector<CallNode> parse_calls(std::string_view source) {
    Parser parser(source, Lexer(source).run());
    return parser.scan();
}

CallNode canonicalize(const CallNode& call, const std::vector<std::string>& arg_order) {
    if (call.positional.size() > arg_order.size()) {
        throw Error("call to '" + call.callee_path() + "' has " +
                    std::to_string(call.positional.size()) + " positional arguments but only " +
                    std::to_string(arg_order.size()) + " argument names are known");
    }
    CallNode out;
    out.callee = call.callee;
    for (std::size_t i = 0; i < call.positional.size(); ++i) {
        if (call.keyword_value(arg_order[i]) != nullptr) {
            throw Error("positional argument " + std::to_string(i + 1) + " of '" +
                        call.callee_path() + "' collides with keyword '" + arg_order[i] + "'");
        }
        out.keyword.push_back(KeywordArg{arg_order[i], call.positional[i]});
    }
    out.keyword.insert(out.keyword.end(), call.keyword.begin(), call.keyword.end());
    return out;
}

std::string to_source(const Value& value) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, StringLit>) return quote(v.text);
            if constexpr (std::is_same_v<T, NumberLit>) return format_number(v.value);
            if constexpr (std::is_same_v<T, BoolLit>) return v.value ? "True" : "False";
            if constexpr (std::is_same_v<T, Identifier>) return v.name;
            if constexpr (std::is_same_v<T, Box<CallNode>>) return to_source(*v);
            if constexpr (std::is_same_v<T, ListLit>) {
                std::string out = "[";
                for (std::size_t i = 0; i < v.items.size(); ++i) {
                    if (i) out += ", ";
                    out += to_source(v.items[i]);
                }
                return out + "]";
            }
            return {};
        },
        value.node);
}

std::string to_source(const CallNode& call) {
    std::string out = call.callee_path() + "(";
    bool first = true;
    for (const auto& v : call.positional) {
        if (!first) out += ", ";
        out += to_source(v);
        first = false;
    }
    for (const auto& kw : call.keyword) {
        if (!first) out += ", ";
        out += kw.name + "=" + to_source(kw.value);
        first = false;
    }
    return out + ")";
}

std::optional<StructuredOutput> parse_structured_output(std::string_view text) {
    static const std::regex kMarker(R"(<\s*(domain|api_call|api_provider|explanation|code)\s*>\s*:?)",
                                    std::regex::icase);
    const std::string owned(text);
    struct Hit {
        std::string tag;
        std::size_t begin;
        std::size_t end;
    };
    std::vector<Hit> hits;
    for (auto it = std::sregex_iterator(owned.begin(), owned.end(), kMarker);
         it != std::sregex_iterator(); ++it) {
        const auto& m = *it;
        hits.push_back(Hit{to_lower(m.str(1)), static_cast<std::size_t>(m.position(0)),
                           static_cast<std::size_t>(m.position(0) + m.length(0))});
    }
    if (hits.empty()) return std::nullopt;

    StructuredOutput out;
    for (std::size_t i = 0; i < hits.size(); ++i) {
        const std::size_t stop = i + 1 < hits.size() ? hits[i + 1].begin : owned.size();
        std::string value = trim(std::string_view(owned).substr(hits[i].end, stop - hits[i].end));
        if (!value.empty() && value.back() == ',') value = trim(value.substr(0, value.size() - 1));
        std::optional<std::string>* slot = nullptr;
        if (hits[i].tag == "domain") slot = &out.domain;
        else if (hits[i].tag == "api_call") slot = &out.api_call;
        else if (hits[i].tag == "api_provider") slot = &out.api_provider;
        else if (hits[i].tag == "explanation") slot = &out.explanation;
        else slot = &out.code;
        if (!slot->has_value()) *slot = std::move(value);
    }
    return out;
}

}  // namespace hubeval
