#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cvdp/common.hpp"
#include "cvdp/graph.hpp"

namespace cvdp::java {

enum class TokKind { Identifier, Keyword, Punct, StringLit, CharLit, NumberLit, End };

struct Token {
    TokKind kind = TokKind::End;
    std::string text;
    int line = 0;
};

/// Tokenizes Java source. Throws Error(Parse) on unterminated literals or
/// comments; everything else becomes a token and is the parser's problem.
std::vector<Token> lex(std::string_view source, const std::string& file);

/// Where a type reference was seen. Maps 1:1 onto the dependency edge types.
enum class RefSite {
    ExtendsType,
    ImplementsType,
    Field,
    StaticField,
    Return,
    Parameter,
    LocalVariable,
    NewExpression,
    AnnotationUse,
    StaticCall,
};

EdgeType ref_site_edge_type(RefSite site);

struct RawRef {
    std::string name;  // as written: simple or (partially) qualified
    RefSite site = RefSite::LocalVariable;
    int line = 0;
    int owner = -1;  // index into ParsedUnit::types; -1 = outside any type
};

struct RawTypeDecl {
    std::string relative_name;  // "Outer.Inner", package not included
    TypeKind kind = TypeKind::Class;
    int line = 0;
};

/// One parsed compilation unit: declarations plus unresolved type references.
struct ParsedUnit {
    std::string path;
    std::string package_name;  // "" = default package
    std::vector<std::pair<std::string, std::string>> single_imports;  // simple -> fqn
    std::vector<std::string> wildcard_imports;                        // package prefixes
    std::vector<RawTypeDecl> types;
    std::vector<RawRef> refs;
    std::vector<Diagnostic> diagnostics;  // recovered oddities, never fatal
};

/// Parses the supported declaration/statement subset. Throws Error(Parse) when
/// the file cannot be processed at all (lex failure, unbalanced braces);
/// smaller problems are skipped over and recorded as diagnostics.
ParsedUnit parse_java_source(std::string_view source, const std::string& path);

}  // namespace cvdp::java
