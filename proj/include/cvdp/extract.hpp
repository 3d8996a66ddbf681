#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cvdp/common.hpp"
#include "cvdp/graph.hpp"
#include "cvdp/java_parser.hpp"

namespace cvdp {

/// Fully qualified name -> kind for every type declared in the analyzed
/// sources. Nested types appear as Outer.Inner under their package.
class TypeDictionary {
  public:
    void add(const std::string& fqn, TypeKind kind);
    bool contains(const std::string& fqn) const;
    std::optional<TypeKind> kind_of(const std::string& fqn) const;
    const std::map<std::string, TypeKind>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }

  private:
    std::map<std::string, TypeKind> entries_;
};

struct ResolveContext {
    std::string package_name;
    const std::vector<std::pair<std::string, std::string>>* single_imports = nullptr;
    const std::vector<std::string>* wildcard_imports = nullptr;
};

/// Resolves a source-level type name against the dictionary: already-qualified
/// names first, then explicit imports, the unit's own package, and wildcard
/// imports in declaration order. Returns nothing for external types.
std::optional<std::string> resolve_type_name(const std::string& name,
                                             const ResolveContext& ctx,
                                             const TypeDictionary& dict,
                                             std::vector<Diagnostic>* diags = nullptr);

/// One resolved dependency occurrence, with its source location.
struct SourceRef {
    std::string from;
    std::string to;
    EdgeType type = EdgeType::Variable;
    std::string file;
    int line = 0;
};

TypeDictionary build_type_dictionary(const std::vector<java::ParsedUnit>& units,
                                     std::vector<Diagnostic>* diags = nullptr);

std::vector<SourceRef> resolve_refs(const std::vector<java::ParsedUnit>& units,
                                    const TypeDictionary& dict,
                                    std::vector<Diagnostic>* diags = nullptr);

/// Deduplicates resolved refs into a typed dependency graph.
CdnGraph build_cdn(const std::vector<java::ParsedUnit>& units,
                   const TypeDictionary& dict,
                   std::vector<Diagnostic>* diags = nullptr);

struct ExtractResult {
    CdnGraph graph;
    std::vector<Diagnostic> diagnostics;
    std::size_t files_parsed = 0;
    std::size_t files_skipped = 0;
};

/// Walks `src_dir` recursively, parses every .java file (unparseable files are
/// skipped with a warning), and extracts the dependency network.
ExtractResult extract_directory(const std::string& src_dir, int workers = 1);

}  // namespace cvdp
