#include "cvdp/java_parser.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

namespace cvdp::java {
namespace {

const std::unordered_set<std::string_view> kKeywords = {
    "abstract", "assert", "boolean", "break", "byte", "case", "catch", "char",
    "class", "const", "continue", "default", "do", "double", "else", "enum",
    "extends", "final", "finally", "float", "for", "goto", "if", "implements",
    "import", "instanceof", "int", "interface", "long", "native", "new",
    "package", "private", "protected", "public", "return", "short", "static",
    "strictfp", "super", "switch", "synchronized", "this", "throw", "throws",
    "transient", "try", "void", "volatile", "while",
};

const std::unordered_set<std::string_view> kPrimitives = {
    "boolean", "byte", "char", "short", "int", "long", "float", "double", "void",
};

const std::unordered_set<std::string_view> kModifiers = {
    "public", "protected", "private", "static", "final", "abstract", "native",
    "synchronized", "transient", "volatile", "strictfp", "default",
};

bool ident_start(unsigned char c) {
    return std::isalpha(c) || c == '_' || c == '$' || c >= 0x80;
}

bool ident_part(unsigned char c) {
    return std::isalnum(c) || c == '_' || c == '$' || c >= 0x80;
}

[[noreturn]] void lex_fail(const std::string& file, int line, const std::string& msg) {
    throw Error(ErrorKind::Parse, file + ":" + std::to_string(line) + ": " + msg);
}

}  // namespace

EdgeType ref_site_edge_type(RefSite site) {
    switch (site) {
        case RefSite::ExtendsType: return EdgeType::Extends;
        case RefSite::ImplementsType: return EdgeType::Implements;
        case RefSite::Field: return EdgeType::ClassMember;
        case RefSite::StaticField: return EdgeType::StaticClassMember;
        case RefSite::Return: return EdgeType::ReturnType;
        case RefSite::Parameter: return EdgeType::Parameter;
        case RefSite::LocalVariable: return EdgeType::Variable;
        case RefSite::NewExpression: return EdgeType::ObjectInstantiation;
        case RefSite::AnnotationUse: return EdgeType::Annotation;
        case RefSite::StaticCall: return EdgeType::StaticMethodCall;
    }
    return EdgeType::Variable;
}

std::vector<Token> lex(std::string_view src, const std::string& file) {
    std::vector<Token> out;
    std::size_t i = 0;
    const std::size_t n = src.size();
    int line = 1;

    auto push = [&](TokKind k, std::string text, int ln) {
        out.push_back(Token{k, std::move(text), ln});
    };

    while (i < n) {
        char c = src[i];
        if (c == '\n') {
            ++line;
            ++i;
            continue;
        }
        if (c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v') {
            ++i;
            continue;
        }
        if (c == '/' && i + 1 < n && src[i + 1] == '/') {
            while (i < n && src[i] != '\n') ++i;
            continue;
        }
        if (c == '/' && i + 1 < n && src[i + 1] == '*') {
            int start_line = line;
            i += 2;
            for (;;) {
                if (i >= n) lex_fail(file, start_line, "unterminated block comment");
                if (src[i] == '\n') ++line;
                if (src[i] == '*' && i + 1 < n && src[i + 1] == '/') {
                    i += 2;
                    break;
                }
                ++i;
            }
            continue;
        }
        if (c == '"') {
            int start_line = line;
            if (i + 2 < n && src[i + 1] == '"' && src[i + 2] == '"') {
                // text block
                i += 3;
                for (;;) {
                    if (i >= n) lex_fail(file, start_line, "unterminated text block");
                    if (src[i] == '\n') ++line;
                    if (src[i] == '\\' && i + 1 < n) {
                        i += 2;
                        continue;
                    }
                    if (src[i] == '"' && i + 2 < n && src[i + 1] == '"' && src[i + 2] == '"') {
                        i += 3;
                        break;
                    }
                    ++i;
                }
                push(TokKind::StringLit, "\"\"", start_line);
                continue;
            }
            ++i;
            for (;;) {
                if (i >= n || src[i] == '\n') lex_fail(file, start_line, "unterminated string literal");
                if (src[i] == '\\' && i + 1 < n) {
                    i += 2;
                    continue;
                }
                if (src[i] == '"') {
                    ++i;
                    break;
                }
                ++i;
            }
            push(TokKind::StringLit, "\"\"", start_line);
            continue;
        }
        if (c == '\'') {
            int start_line = line;
            ++i;
            for (;;) {
                if (i >= n || src[i] == '\n') lex_fail(file, start_line, "unterminated character literal");
                if (src[i] == '\\' && i + 1 < n) {
                    i += 2;
                    continue;
                }
                if (src[i] == '\'') {
                    ++i;
                    break;
                }
                ++i;
            }
            push(TokKind::CharLit, "''", start_line);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && i + 1 < n && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
            std::size_t start = i;
            int start_line = line;
            ++i;
            while (i < n) {
                char d = src[i];
                if (std::isalnum(static_cast<unsigned char>(d)) || d == '_' || d == '.') {
                    ++i;
                    continue;
                }
                if ((d == '+' || d == '-') && (src[i - 1] == 'e' || src[i - 1] == 'E' ||
                                              src[i - 1] == 'p' || src[i - 1] == 'P')) {
                    ++i;
                    continue;
                }
                break;
            }
            push(TokKind::NumberLit, std::string(src.substr(start, i - start)), start_line);
            continue;
        }
        if (ident_start(static_cast<unsigned char>(c))) {
            std::size_t start = i;
            int start_line = line;
            ++i;
            while (i < n && ident_part(static_cast<unsigned char>(src[i]))) ++i;
            std::string word(src.substr(start, i - start));
            TokKind kind = kKeywords.count(word) ? TokKind::Keyword : TokKind::Identifier;
            push(kind, std::move(word), start_line);
            continue;
        }
        // multi-char operators the parser cares about; the rest stay single chars
        if (c == '.' && i + 2 < n && src[i + 1] == '.' && src[i + 2] == '.') {
            push(TokKind::Punct, "...", line);
            i += 3;
            continue;
        }
        if (c == ':' && i + 1 < n && src[i + 1] == ':') {
            push(TokKind::Punct, "::", line);
            i += 2;
            continue;
        }
        if (c == '-' && i + 1 < n && src[i + 1] == '>') {
            push(TokKind::Punct, "->", line);
            i += 2;
            continue;
        }
        push(TokKind::Punct, std::string(1, c), line);
        ++i;
    }
    push(TokKind::End, "", line);
    return out;
}

namespace {

struct TypeRef {
    bool ok = false;        // a type was syntactically present
    bool has_name = false;  // false for primitives / void
    std::string name;       // dotted, generics erased, arrays stripped
    int line = 0;
};

class Parser {
  public:
    Parser(std::vector<Token> toks, ParsedUnit& unit) : toks_(std::move(toks)), unit_(unit) {}

    void run() {
        parse_package_and_imports();
        while (!at_end()) {
            if (!parse_member(/*in_type_body=*/false, "", -1)) {
                note("skipping unexpected token '" + peek().text + "'");
                advance();
            }
        }
    }

  private:
    std::vector<Token> toks_;
    ParsedUnit& unit_;
    std::size_t pos_ = 0;

    // --- token helpers -----------------------------------------------------

    const Token& peek(std::size_t ahead = 0) const {
        std::size_t k = pos_ + ahead;
        return k < toks_.size() ? toks_[k] : toks_.back();
    }
    bool at_end() const { return peek().kind == TokKind::End; }
    const Token& advance() { return toks_[std::min(pos_++, toks_.size() - 1)]; }
    bool is_punct(std::string_view p, std::size_t ahead = 0) const {
        const Token& t = peek(ahead);
        return t.kind == TokKind::Punct && t.text == p;
    }
    bool is_kw(std::string_view k, std::size_t ahead = 0) const {
        const Token& t = peek(ahead);
        return t.kind == TokKind::Keyword && t.text == k;
    }
    bool accept_punct(std::string_view p) {
        if (!is_punct(p)) return false;
        advance();
        return true;
    }
    bool accept_kw(std::string_view k) {
        if (!is_kw(k)) return false;
        advance();
        return true;
    }

    void note(const std::string& msg) {
        unit_.diagnostics.push_back(
            Diagnostic{Severity::Warning, unit_.path, peek().line, msg});
    }

    void add_ref(std::string name, RefSite site, int line, int owner) {
        if (owner < 0 || name.empty()) return;
        unit_.refs.push_back(RawRef{std::move(name), site, line, owner});
    }

    // --- small grammar pieces ----------------------------------------------

    std::string parse_dotted_name() {
        if (peek().kind != TokKind::Identifier) return {};
        std::string name = advance().text;
        while (is_punct(".") && peek(1).kind == TokKind::Identifier) {
            advance();
            name += '.';
            name += advance().text;
        }
        return name;
    }

    /// Skips a balanced <...> group. In strict mode only tokens that can occur
    /// inside a type argument list are allowed, so `a < b` is not swallowed.
    bool skip_generics(bool strict) {
        if (!is_punct("<")) return true;
        std::size_t save = pos_;
        advance();
        int depth = 1;
        int budget = 256;
        while (depth > 0) {
            if (at_end() || --budget == 0) {
                pos_ = save;
                return false;
            }
            const Token& t = peek();
            if (t.kind == TokKind::Punct) {
                if (t.text == "<") ++depth;
                else if (t.text == ">") --depth;
                else if (strict && t.text != "," && t.text != "." && t.text != "?" &&
                         t.text != "[" && t.text != "]" && t.text != "&" && t.text != "@") {
                    pos_ = save;
                    return false;
                }
            } else if (strict && t.kind != TokKind::Identifier &&
                       !(t.kind == TokKind::Keyword &&
                         (t.text == "extends" || t.text == "super" || kPrimitives.count(t.text)))) {
                pos_ = save;
                return false;
            }
            advance();
        }
        return true;
    }

    void skip_array_suffix() {
        while (is_punct("[") && is_punct("]", 1)) {
            advance();
            advance();
        }
        accept_punct("...");
    }

    /// Balanced skip from an opening bracket already at pos_.
    void skip_balanced(const char* open, const char* close) {
        if (!is_punct(open)) return;
        advance();
        int depth = 1;
        while (depth > 0 && !at_end()) {
            if (is_punct(open)) ++depth;
            else if (is_punct(close)) --depth;
            advance();
        }
    }

    /// `@Name` or `@pkg.Name(args)`; emits an A ref when owner >= 0, otherwise
    /// returns the name so it can be attached to a type declared right after.
    std::string parse_annotation_use(int owner) {
        advance();  // '@'
        int line = peek().line;
        std::string name = parse_dotted_name();
        if (name.empty()) {
            note("stray '@'");
            return {};
        }
        if (is_punct("(")) skip_balanced("(", ")");
        if (owner >= 0) add_ref(name, RefSite::AnnotationUse, line, owner);
        return name;
    }

    /// Type syntax: annotations, primitive or dotted name, generics, arrays.
    TypeRef try_parse_type(bool strict, int owner) {
        std::size_t save = pos_;
        TypeRef r;
        while (is_punct("@") && !is_kw("interface", 1)) parse_annotation_use(owner);
        r.line = peek().line;
        if (peek().kind == TokKind::Keyword && kPrimitives.count(peek().text)) {
            advance();
            skip_array_suffix();
            r.ok = true;
            return r;
        }
        if (peek().kind != TokKind::Identifier) {
            pos_ = save;
            return r;
        }
        r.name = parse_dotted_name();
        if (is_punct("<") && !skip_generics(strict)) {
            pos_ = save;
            return TypeRef{};
        }
        skip_array_suffix();
        r.ok = true;
        r.has_name = true;
        return r;
    }

    // --- compilation unit structure ----------------------------------------

    void parse_package_and_imports() {
        while (is_punct("@") && !is_kw("interface", 1)) parse_annotation_use(-1);
        if (accept_kw("package")) {
            unit_.package_name = parse_dotted_name();
            if (unit_.package_name.empty()) note("missing package name");
            if (!accept_punct(";")) note("missing ';' after package declaration");
        }
        while (is_kw("import")) {
            advance();
            bool is_static = accept_kw("static");
            std::string name = parse_dotted_name();
            bool wildcard = false;
            if (is_punct(".") && is_punct("*", 1)) {
                advance();
                advance();
                wildcard = true;
            }
            if (!accept_punct(";")) {
                note("missing ';' after import");
                skip_to_semicolon();
            }
            if (name.empty()) continue;
            if (is_static) continue;  // static imports bring members, not types
            if (wildcard) {
                unit_.wildcard_imports.push_back(name);
            } else {
                auto dot = name.rfind('.');
                std::string simple = dot == std::string::npos ? name : name.substr(dot + 1);
                unit_.single_imports.emplace_back(std::move(simple), std::move(name));
            }
        }
    }

    void skip_to_semicolon() {
        while (!at_end() && !is_punct(";")) {
            if (is_punct("{")) {
                skip_balanced("{", "}");
                return;
            }
            advance();
        }
        accept_punct(";");
    }

    /// Parses one declaration (type, field, method, constructor, initializer).
    /// Returns false when the leading tokens match nothing we know.
    bool parse_member(bool in_type_body, const std::string& prefix, int owner) {
        std::vector<std::pair<std::string, int>> pending_annotations;
        bool static_mod = false;
        for (;;) {
            if (is_punct("@") && !is_kw("interface", 1)) {
                int line = peek(1).line;
                std::string name = parse_annotation_use(-2);
                if (!name.empty()) pending_annotations.emplace_back(name, line);
                continue;
            }
            if (peek().kind == TokKind::Keyword && kModifiers.count(peek().text)) {
                if (peek().text == "static") static_mod = true;
                advance();
                continue;
            }
            break;
        }
        // annotations on a type declaration belong to the declared type; on any
        // other member they belong to the enclosing type
        auto flush_annotations = [&] {
            for (auto& [ann, line] : pending_annotations)
                add_ref(ann, RefSite::AnnotationUse, line, owner);
            pending_annotations.clear();
        };

        if (is_kw("class")) {
            advance();
            parse_type_rest(TypeKind::Class, prefix, pending_annotations);
            return true;
        }
        if (is_kw("interface")) {
            advance();
            parse_type_rest(TypeKind::Interface, prefix, pending_annotations);
            return true;
        }
        if (is_kw("enum")) {
            advance();
            parse_enum_rest(prefix, pending_annotations);
            return true;
        }
        if (is_punct("@") && is_kw("interface", 1)) {
            advance();
            advance();
            parse_type_rest(TypeKind::Annotation, prefix, pending_annotations);
            return true;
        }
        if (peek().kind == TokKind::Identifier &&
            (peek().text == "record" || peek().text == "sealed" || peek().text == "non") &&
            looks_like_restricted_keyword()) {
            return parse_restricted_keyword_decl(prefix, pending_annotations);
        }
        if (accept_punct(";")) return true;
        if (!in_type_body) return false;

        flush_annotations();
        if (is_punct("{")) {  // instance or static initializer
            scan_statements(owner);
            return true;
        }
        if (is_punct("<")) {  // generic method: <T> T id(...)
            if (!skip_generics(false)) {
                advance();
                return true;
            }
        }
        return parse_field_or_method(owner, static_mod);
    }

    bool looks_like_restricted_keyword() {
        // "record Name(" / "sealed class" / "non - sealed class"
        if (peek().text == "record")
            return peek(1).kind == TokKind::Identifier &&
                   (is_punct("(", 2) || is_punct("<", 2));
        if (peek().text == "sealed") return true;
        return is_punct("-", 1) && peek(2).kind == TokKind::Identifier &&
               peek(2).text == "sealed";
    }

    bool parse_restricted_keyword_decl(const std::string& prefix,
                                       std::vector<std::pair<std::string, int>>& anns) {
        if (peek().text == "sealed") {
            advance();
        } else if (peek().text == "non") {
            advance();
            advance();
            advance();
        }
        while (peek().kind == TokKind::Keyword && kModifiers.count(peek().text)) advance();
        if (is_kw("class")) {
            advance();
            parse_type_rest(TypeKind::Class, prefix, anns);
            return true;
        }
        if (is_kw("interface")) {
            advance();
            parse_type_rest(TypeKind::Interface, prefix, anns);
            return true;
        }
        if (peek().text == "record") {
            advance();
            parse_record_rest(prefix, anns);
            return true;
        }
        return false;
    }

    int declare_type(const std::string& prefix, const std::string& name, TypeKind kind,
                     int line, std::vector<std::pair<std::string, int>>& anns) {
        std::string relative = prefix.empty() ? name : prefix + "." + name;
        unit_.types.push_back(RawTypeDecl{relative, kind, line});
        int ti = static_cast<int>(unit_.types.size()) - 1;
        for (auto& [ann, ann_line] : anns)
            add_ref(ann, RefSite::AnnotationUse, ann_line, ti);
        anns.clear();
        return ti;
    }

    void parse_extends_implements(int ti) {
        if (accept_kw("extends")) parse_type_list(ti, RefSite::ExtendsType);
        if (accept_kw("implements")) parse_type_list(ti, RefSite::ImplementsType);
        if (peek().kind == TokKind::Identifier && peek().text == "permits") {
            advance();
            while (!at_end() && !is_punct("{")) advance();
        }
    }

    void parse_type_list(int owner, RefSite site) {
        do {
            TypeRef t = try_parse_type(false, owner);
            if (!t.ok) {
                note("expected type name");
                return;
            }
            if (t.has_name) add_ref(t.name, site, t.line, owner);
        } while (accept_punct(","));
    }

    void parse_type_rest(TypeKind kind, const std::string& prefix,
                         std::vector<std::pair<std::string, int>>& anns) {
        if (peek().kind != TokKind::Identifier) {
            note("missing type name");
            skip_to_semicolon();
            return;
        }
        int line = peek().line;
        std::string name = advance().text;
        int ti = declare_type(prefix, name, kind, line, anns);
        skip_generics(false);
        parse_extends_implements(ti);
        if (!is_punct("{")) {
            note("missing '{' in declaration of " + name);
            skip_to_semicolon();
            return;
        }
        parse_type_body(unit_.types[ti].relative_name, ti);
    }

    void parse_record_rest(const std::string& prefix,
                           std::vector<std::pair<std::string, int>>& anns) {
        if (peek().kind != TokKind::Identifier) {
            note("missing record name");
            skip_to_semicolon();
            return;
        }
        int line = peek().line;
        std::string name = advance().text;
        int ti = declare_type(prefix, name, TypeKind::Class, line, anns);
        skip_generics(false);
        if (is_punct("(")) parse_parameters(ti);  // components behave like fields
        parse_extends_implements(ti);
        if (is_punct("{")) parse_type_body(unit_.types[ti].relative_name, ti);
    }

    // `relative` is by value: declaring nested types reallocates unit_.types,
    // so references into it must not be held across parse_member calls
    void parse_type_body(std::string relative, int ti) {
        advance();  // '{'
        while (!at_end() && !is_punct("}")) {
            if (!parse_member(/*in_type_body=*/true, relative, ti)) {
                note("skipping unexpected token '" + peek().text + "' in type body");
                advance();
            }
        }
        accept_punct("}");
    }

    void parse_enum_rest(const std::string& prefix,
                         std::vector<std::pair<std::string, int>>& anns) {
        if (peek().kind != TokKind::Identifier) {
            note("missing enum name");
            skip_to_semicolon();
            return;
        }
        int line = peek().line;
        std::string name = advance().text;
        int ti = declare_type(prefix, name, TypeKind::Enum, line, anns);
        if (accept_kw("implements")) parse_type_list(ti, RefSite::ImplementsType);
        if (!is_punct("{")) {
            note("missing '{' in enum " + name);
            skip_to_semicolon();
            return;
        }
        advance();
        // constant list, then optional ';' followed by ordinary members
        while (!at_end() && !is_punct("}")) {
            while (is_punct("@") && !is_kw("interface", 1)) parse_annotation_use(ti);
            if (accept_punct(",")) continue;
            if (accept_punct(";")) {
                std::string relative = unit_.types[ti].relative_name;
                while (!at_end() && !is_punct("}")) {
                    if (!parse_member(true, relative, ti)) {
                        note("skipping unexpected token '" + peek().text + "' in enum body");
                        advance();
                    }
                }
                break;
            }
            if (peek().kind == TokKind::Identifier) {
                advance();  // constant name
                if (is_punct("(")) scan_arguments(ti);
                if (is_punct("{")) skip_balanced("{", "}");  // constant class body
                continue;
            }
            note("skipping unexpected token '" + peek().text + "' in enum constants");
            advance();
        }
        accept_punct("}");
    }

    // --- fields, methods, constructors -------------------------------------

    bool parse_field_or_method(int owner, bool static_mod) {
        TypeRef tp = try_parse_type(false, owner);
        if (!tp.ok) return false;

        if (is_punct("(")) {
            // constructor: the "type" we read was its name
            auto params = parse_parameters(owner);
            parse_method_tail(owner, std::move(params));
            return true;
        }
        if (peek().kind != TokKind::Identifier) {
            note("expected member name");
            skip_to_semicolon();
            return true;
        }
        advance();  // member name
        if (is_punct("(")) {
            if (tp.has_name) add_ref(tp.name, RefSite::Return, tp.line, owner);
            auto params = parse_parameters(owner);
            parse_method_tail(owner, std::move(params));
            return true;
        }
        // field declaration, possibly with several declarators
        if (tp.has_name)
            add_ref(tp.name, static_mod ? RefSite::StaticField : RefSite::Field, tp.line, owner);
        skip_array_suffix();
        for (;;) {
            if (accept_punct("=")) scan_expression(owner);
            if (accept_punct(",")) {
                if (peek().kind == TokKind::Identifier) advance();
                skip_array_suffix();
                continue;
            }
            if (accept_punct(";")) break;
            if (at_end()) break;
            note("malformed field declaration");
            skip_to_semicolon();
            break;
        }
        return true;
    }

    std::vector<std::string> parse_parameters(int owner) {
        std::vector<std::string> names;
        advance();  // '('
        if (accept_punct(")")) return names;
        for (;;) {
            while (is_punct("@")) parse_annotation_use(owner);
            while (is_kw("final")) advance();
            TypeRef tp = try_parse_type(false, owner);
            if (!tp.ok) {
                // unparseable parameter: resync on ',' or ')'
                int depth = 0;
                while (!at_end()) {
                    if (is_punct("(") || is_punct("[") || is_punct("<")) ++depth;
                    else if (is_punct(")") || is_punct("]") || is_punct(">")) {
                        if (depth == 0) break;
                        --depth;
                    } else if (is_punct(",") && depth == 0) {
                        break;
                    }
                    advance();
                }
            } else {
                if (tp.has_name) add_ref(tp.name, RefSite::Parameter, tp.line, owner);
                if (is_kw("this")) advance();  // receiver parameter
                else if (peek().kind == TokKind::Identifier) {
                    names.push_back(advance().text);
                    skip_array_suffix();
                }
            }
            if (accept_punct(",")) continue;
            accept_punct(")");
            return names;
        }
    }

    /// After the parameter list: throws clause, then body / default value / ';'.
    void parse_method_tail(int owner, std::vector<std::string> params = {}) {
        if (is_kw("throws")) {
            advance();
            do {
                parse_dotted_name();
            } while (accept_punct(","));
        }
        if (is_kw("default")) {  // annotation type member default value
            advance();
            if (is_punct("{")) skip_balanced("{", "}");
            else scan_expression(owner);
            accept_punct(";");
            return;
        }
        if (is_punct("{")) {
            scan_statements(owner, std::move(params));
            return;
        }
        accept_punct(";");
    }

    // --- statement / expression scanning ------------------------------------

    struct ScanState {
        int brace = 0, paren = 0, bracket = 0;
        bool operator==(const ScanState&) const = default;
    };

    /// Scans a `{ ... }` block: tracks local variable declarations, emits V /
    /// OI / SMC refs, recurses through nested blocks and anonymous classes.
    void scan_statements(int owner, std::vector<std::string> initial_locals = {}) {
        advance();  // '{'
        std::vector<std::vector<std::string>> scopes(1);
        scopes[0] = std::move(initial_locals);
        ScanState depth;
        depth.brace = 1;
        bool stmt_start = true;
        bool decl_mode = false;
        ScanState decl_depth;

        auto is_local = [&](const std::string& name) {
            for (const auto& frame : scopes)
                if (std::find(frame.begin(), frame.end(), name) != frame.end()) return true;
            return false;
        };

        while (!at_end()) {
            const Token& t = peek();
            if (t.kind == TokKind::Punct) {
                const std::string& p = t.text;
                if (p == "{") {
                    ++depth.brace;
                    scopes.emplace_back();
                    stmt_start = true;
                    advance();
                } else if (p == "}") {
                    --depth.brace;
                    if (decl_mode && depth.brace < decl_depth.brace) decl_mode = false;
                    if (!scopes.empty()) scopes.pop_back();
                    advance();
                    if (depth.brace == 0) return;
                    stmt_start = true;
                } else if (p == "(") {
                    ++depth.paren;
                    stmt_start = false;
                    advance();
                } else if (p == ")") {
                    --depth.paren;
                    if (decl_mode && depth.paren < decl_depth.paren) decl_mode = false;
                    stmt_start = false;
                    advance();
                } else if (p == "[") {
                    ++depth.bracket;
                    stmt_start = false;
                    advance();
                } else if (p == "]") {
                    --depth.bracket;
                    stmt_start = false;
                    advance();
                } else if (p == ";") {
                    if (decl_mode && depth == decl_depth) decl_mode = false;
                    stmt_start = true;
                    advance();
                } else if (p == ",") {
                    if (decl_mode && depth == decl_depth &&
                        peek(1).kind == TokKind::Identifier) {
                        advance();
                        scopes.back().push_back(advance().text);
                        skip_array_suffix();
                    } else {
                        advance();
                    }
                    stmt_start = false;
                } else if (p == "@") {
                    parse_annotation_use(owner);
                    stmt_start = true;
                } else if (p == ":" || p == "->") {
                    decl_mode = false;
                    stmt_start = true;
                    advance();
                } else {
                    stmt_start = false;
                    advance();
                }
                continue;
            }
            if (t.kind == TokKind::Keyword) {
                const std::string& k = t.text;
                if (k == "new") {
                    advance();
                    TypeRef tp = try_parse_type(true, owner);
                    if (tp.ok && tp.has_name)
                        add_ref(tp.name, RefSite::NewExpression, tp.line, owner);
                    stmt_start = false;
                    continue;
                }
                if (k == "catch") {
                    advance();
                    if (is_punct("(")) {
                        ++depth.paren;
                        advance();
                        do {
                            TypeRef tp = try_parse_type(false, owner);
                            if (tp.ok && tp.has_name)
                                add_ref(tp.name, RefSite::LocalVariable, tp.line, owner);
                        } while (accept_punct("|"));
                        if (peek().kind == TokKind::Identifier)
                            scopes.back().push_back(advance().text);
                    }
                    stmt_start = false;
                    continue;
                }
                if (k == "for" || k == "try" || k == "switch" || k == "while" || k == "if" ||
                    k == "synchronized") {
                    advance();
                    if (is_punct("(")) {
                        ++depth.paren;
                        advance();
                        stmt_start = true;  // resource / init declarations
                    }
                    continue;
                }
                if (k == "case") {
                    advance();
                    stmt_start = false;
                    continue;
                }
                if (k == "instanceof") {
                    advance();
                    // pattern variable: instanceof Foo f
                    TypeRef tp = try_parse_type(true, owner);
                    if (tp.ok && peek().kind == TokKind::Identifier)
                        scopes.back().push_back(advance().text);
                    stmt_start = false;
                    continue;
                }
                if (kPrimitives.count(k) && stmt_start) {
                    std::size_t save = pos_;
                    TypeRef tp = try_parse_type(true, owner);
                    if (tp.ok && peek().kind == TokKind::Identifier &&
                        is_declarator_follower(1)) {
                        scopes.back().push_back(advance().text);
                        skip_array_suffix();
                        decl_mode = true;
                        decl_depth = depth;
                        stmt_start = false;
                        continue;
                    }
                    pos_ = save;
                    advance();
                    stmt_start = false;
                    continue;
                }
                advance();
                if (k == "return" || k == "throw" || k == "else" || k == "do" ||
                    k == "assert" || k == "finally")
                    stmt_start = true;
                else
                    stmt_start = false;
                continue;
            }
            if (t.kind == TokKind::Identifier) {
                if (t.text == "var" && stmt_start && peek(1).kind == TokKind::Identifier &&
                    is_declarator_follower(2)) {
                    advance();
                    scopes.back().push_back(advance().text);
                    decl_mode = true;
                    decl_depth = depth;
                    stmt_start = false;
                    continue;
                }
                if (stmt_start) {
                    std::size_t save = pos_;
                    TypeRef tp = try_parse_type(true, owner);
                    if (tp.ok && tp.has_name && peek().kind == TokKind::Identifier &&
                        is_declarator_follower(1)) {
                        add_ref(tp.name, RefSite::LocalVariable, tp.line, owner);
                        scopes.back().push_back(advance().text);
                        skip_array_suffix();
                        decl_mode = true;
                        decl_depth = depth;
                        stmt_start = false;
                        continue;
                    }
                    pos_ = save;
                }
                // qualified call chain: Name.other.method(...)
                std::vector<std::string> chain{advance().text};
                int line = t.line;
                while (is_punct(".") && peek(1).kind == TokKind::Identifier) {
                    advance();
                    chain.push_back(advance().text);
                }
                if (chain.size() >= 2 && is_punct("(") && !is_local(chain.front())) {
                    std::string qualifier = chain.front();
                    for (std::size_t q = 1; q + 1 < chain.size(); ++q) {
                        qualifier += '.';
                        qualifier += chain[q];
                    }
                    add_ref(qualifier, RefSite::StaticCall, line, owner);
                }
                stmt_start = false;
                continue;
            }
            advance();
            stmt_start = false;
        }
    }

    /// After `Type name`, these decide that we saw a declaration.
    bool is_declarator_follower(std::size_t ahead) {
        std::size_t k = ahead;
        while (is_punct("[", k) && is_punct("]", k + 1)) k += 2;
        return is_punct("=", k) || is_punct(";", k) || is_punct(",", k) || is_punct(":", k);
    }

    /// Expression scan for field initializers and annotation defaults: emits
    /// OI and SMC refs, stops at a top-level ',' or ';' (not consumed).
    void scan_expression(int owner) {
        ScanState depth;
        while (!at_end()) {
            const Token& t = peek();
            if (t.kind == TokKind::Punct) {
                const std::string& p = t.text;
                if ((p == ";" || p == ",") && depth == ScanState{}) return;
                if (p == "{") ++depth.brace;
                else if (p == "}") {
                    if (depth.brace == 0) return;
                    --depth.brace;
                } else if (p == "(") ++depth.paren;
                else if (p == ")") {
                    if (depth.paren == 0) return;
                    --depth.paren;
                } else if (p == "[") ++depth.bracket;
                else if (p == "]") {
                    if (depth.bracket == 0) return;
                    --depth.bracket;
                }
                advance();
                continue;
            }
            if (t.kind == TokKind::Keyword && t.text == "new") {
                advance();
                TypeRef tp = try_parse_type(true, owner);
                if (tp.ok && tp.has_name)
                    add_ref(tp.name, RefSite::NewExpression, tp.line, owner);
                continue;
            }
            if (t.kind == TokKind::Identifier) {
                std::vector<std::string> chain{advance().text};
                int line = t.line;
                while (is_punct(".") && peek(1).kind == TokKind::Identifier) {
                    advance();
                    chain.push_back(advance().text);
                }
                if (chain.size() >= 2 && is_punct("(")) {
                    std::string qualifier = chain.front();
                    for (std::size_t q = 1; q + 1 < chain.size(); ++q) {
                        qualifier += '.';
                        qualifier += chain[q];
                    }
                    add_ref(qualifier, RefSite::StaticCall, line, owner);
                }
                continue;
            }
            advance();
        }
    }

    /// Enum constant arguments: `(` expr, expr `)` with OI / SMC scanning.
    void scan_arguments(int owner) {
        advance();  // '('
        int depth = 1;
        while (depth > 0 && !at_end()) {
            if (is_punct("(")) {
                ++depth;
                advance();
            } else if (is_punct(")")) {
                --depth;
                advance();
            } else if (is_kw("new")) {
                advance();
                TypeRef tp = try_parse_type(true, owner);
                if (tp.ok && tp.has_name)
                    add_ref(tp.name, RefSite::NewExpression, tp.line, owner);
            } else if (peek().kind == TokKind::Identifier) {
                const Token& t0 = peek();
                std::vector<std::string> chain{advance().text};
                int line = t0.line;
                while (is_punct(".") && peek(1).kind == TokKind::Identifier) {
                    advance();
                    chain.push_back(advance().text);
                }
                if (chain.size() >= 2 && is_punct("(")) {
                    std::string qualifier = chain.front();
                    for (std::size_t q = 1; q + 1 < chain.size(); ++q) {
                        qualifier += '.';
                        qualifier += chain[q];
                    }
                    add_ref(qualifier, RefSite::StaticCall, line, owner);
                }
            } else {
                advance();
            }
        }
    }
};

}  // namespace

ParsedUnit parse_java_source(std::string_view source, const std::string& path) {
    ParsedUnit unit;
    unit.path = path;
    Parser parser(lex(source, path), unit);
    parser.run();
    return unit;
}

}  // namespace cvdp::java
