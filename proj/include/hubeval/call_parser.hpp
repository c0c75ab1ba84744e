#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace hubeval {

struct CallNode;
struct Value;

/// Heap box with value semantics; lets Value hold a CallNode recursively.
template <class T>
class Box {
public:
    Box(T value) : ptr_(std::make_unique<T>(std::move(value))) {}  // NOLINT(implicit)
    Box(const Box& other) : ptr_(std::make_unique<T>(*other.ptr_)) {}
    Box(Box&&) noexcept = default;
    Box& operator=(const Box& other) {
        if (this != &other) ptr_ = std::make_unique<T>(*other.ptr_);
        return *this;
    }
    Box& operator=(Box&&) noexcept = default;
    ~Box() = default;

    const T& operator*() const { return *ptr_; }
    T& operator*() { return *ptr_; }
    const T* operator->() const { return ptr_.get(); }
    T* operator->() { return ptr_.get(); }

private:
    std::unique_ptr<T> ptr_;
};

/// String literal content, quotes and escapes removed.
struct StringLit {
    std::string text;
};
struct NumberLit {
    double value = 0.0;
};
struct BoolLit {
    bool value = false;
};
/// A bare (possibly dotted) name, `None`, or the raw text of an expression the
/// grammar does not model.
struct Identifier {
    std::string name;
};
struct ListLit {
    std::vector<Value> items;
};

struct Value {
    using Variant = std::variant<StringLit, NumberLit, BoolLit, Identifier, Box<CallNode>, ListLit>;
    Variant node;

    template <class T>
    const T* as() const { return std::get_if<T>(&node); }
    template <class T>
    bool is() const { return std::holds_alternative<T>(node); }
};

struct KeywordArg {
    std::string name;
    Value value;
};

struct CallNode {
    std::vector<std::string> callee;
    std::vector<Value> positional;
    std::vector<KeywordArg> keyword;

    std::string callee_path() const;
    const Value* keyword_value(std::string_view name) const;
};

Value make_string(std::string text);
Value make_number(double value);
Value make_bool(bool value);
Value make_identifier(std::string name);
Value make_call(CallNode call);
Value make_list(std::vector<Value> items);

/// Exact structural equality.
bool operator==(const Value& a, const Value& b);
bool operator==(const CallNode& a, const CallNode& b);
bool operator==(const KeywordArg& a, const KeywordArg& b);

/// Equality used when verifying arguments: string content is compared after
/// trimming (quote style is already gone), case-sensitively; an Identifier is
/// never equal to a literal.
bool values_match(const Value& a, const Value& b);

/// Every top-level call expression in `source`, in textual order. Calls nested
/// inside arguments stay inside their parent. Empty when nothing is recognised.
std::vector<CallNode> parse_calls(std::string_view source);

/// Moves positional arguments into keyword slots named by `arg_order`.
/// Throws Error if there are more positionals than names or a name is already
/// bound by keyword.
CallNode canonicalize(const CallNode& call, const std::vector<std::string>& arg_order);

/// Canonical source form: single-quoted strings, shortest round-trip numbers,
/// `True`/`False`, lists in brackets, positionals before keywords.
std::string to_source(const CallNode& call);
std::string to_source(const Value& value);

struct StructuredOutput {
    std::optional<std::string> domain;
    std::optional<std::string> api_call;
    std::optional<std::string> api_provider;
    std::optional<std::string> explanation;
    std::optional<std::string> code;

    bool operator==(const StructuredOutput&) const = default;
};

/// Parses `<domain>: ... <api_call>: ...` tagged text. nullopt when no tag is found.
std::optional<StructuredOutput> parse_structured_output(std::string_view text);

}  // namespace hubeval
