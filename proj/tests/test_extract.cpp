#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>

#include "cvdp/extract.hpp"
#include "cvdp/graph.hpp"
#include "cvdp/java_parser.hpp"

using namespace cvdp;

namespace {

const char* kFigSource = R"java(
interface Ifc{
    void f();
}

public class Ac implements Ifc{
    private Cc c;

    public void f(){
        c = new Cc();
    }
}

public class Bc extends Ac{
    public Cc f2(Ifc i, Cc c2){
        i.f();
        return this.c;
    }
}

public class Cc{
//...
}
)java";

std::vector<java::ParsedUnit> parse_all(std::initializer_list<const char*> sources) {
    std::vector<java::ParsedUnit> units;
    int k = 0;
    for (const char* src : sources)
        units.push_back(java::parse_java_source(src, "unit" + std::to_string(k++) + ".java"));
    return units;
}

CdnGraph extract(std::initializer_list<const char*> sources) {
    auto units = parse_all(sources);
    auto dict = build_type_dictionary(units);
    return build_cdn(units, dict);
}

std::set<std::string> edge_set(const CdnGraph& g) {
    std::set<std::string> out;
    for (const auto& e : g.edges())
        out.insert(e.from + ">" + e.to + ":" + edge_type_name(e.type));
    return out;
}

}  // namespace

TEST_SUITE("extract") {

TEST_CASE("four-class example: dictionary") {
    auto units = parse_all({kFigSource});
    auto dict = build_type_dictionary(units);
    REQUIRE(dict.size() == 4);
    CHECK(dict.kind_of("Ifc") == TypeKind::Interface);
    CHECK(dict.kind_of("Ac") == TypeKind::Class);
    CHECK(dict.kind_of("Bc") == TypeKind::Class);
    CHECK(dict.kind_of("Cc") == TypeKind::Class);
}

TEST_CASE("four-class example: typed edges") {
    CdnGraph g = extract({kFigSource});
    std::set<std::string> expect = {
        "Ac>Ifc:I", "Ac>Cc:CM", "Ac>Cc:OI",
        "Bc>Ac:E",  "Bc>Cc:R",  "Bc>Cc:P", "Bc>Ifc:P",
    };
    CHECK(edge_set(g) == expect);
    CHECK(strip(g).edge_count() == 5);
}

TEST_CASE("empty input yields an empty dictionary") {
    std::vector<java::ParsedUnit> units;
    CHECK(build_type_dictionary(units).size() == 0);
}

TEST_CASE("same simple name in two packages gives two entries") {
    auto units = parse_all({"package p1; class A {}", "package p2; class A {}"});
    auto dict = build_type_dictionary(units);
    REQUIRE(dict.size() == 2);
    CHECK(dict.contains("p1.A"));
    CHECK(dict.contains("p2.A"));
}

TEST_CASE("class with no in-project references has a node and no edges") {
    CdnGraph g = extract({"class Lonely { String s; void go(int x) { x++; } }"});
    CHECK(g.nodes().size() == 1);
    CHECK(g.edges().empty());
}

TEST_CASE("qualified static call produces an SMC edge") {
    CdnGraph g = extract({"class A { void m() { B.staticMethod(); } }", "class B {}"});
    CHECK(edge_set(g) == std::set<std::string>{"A>B:SMC"});
}

TEST_CASE("static call through a local variable name is suppressed") {
    CdnGraph g = extract({
        "class A { void m() { B B = null; B.run(); } }",
        "class B {}",
    });
    // the declaration itself is a V edge; no SMC since B names a local
    CHECK(edge_set(g) == std::set<std::string>{"A>B:V"});
}

TEST_CASE("static call through a parameter name is suppressed") {
    CdnGraph g = extract({
        "class A { void m(B B) { B.run(); } }",
        "class B {}",
    });
    CHECK(edge_set(g) == std::set<std::string>{"A>B:P"});
}

TEST_CASE("instance-qualified chains produce no SMC edge") {
    CdnGraph g = extract({
        "class A { B b; void m() { b.run(); this.b.run(); } }",
        "class B { void run() {} }",
    });
    CHECK(edge_set(g) == std::set<std::string>{"A>B:CM"});
}

TEST_CASE("resolution prefers explicit import over same package") {
    auto units = parse_all({
        "package p1; import p2.A; class User { A a; }",
        "package p1; class A {}",
        "package p2; class A {}",
    });
    auto dict = build_type_dictionary(units);
    ResolveContext ctx;
    ctx.package_name = units[0].package_name;
    ctx.single_imports = &units[0].single_imports;
    ctx.wildcard_imports = &units[0].wildcard_imports;
    CHECK(resolve_type_name("A", ctx, dict) == std::string("p2.A"));

    CdnGraph g = build_cdn(units, dict);
    CHECK(edge_set(g) == std::set<std::string>{"p1.User>p2.A:CM"});
}

TEST_CASE("resolution order: qualified, package, wildcard, none") {
    auto units = parse_all({
        "package p1; import ext.util.*; import p2.*; class User {}",
        "package p2; class Helper {}",
    });
    auto dict = build_type_dictionary(units);
    ResolveContext ctx;
    ctx.package_name = units[0].package_name;
    ctx.single_imports = &units[0].single_imports;
    ctx.wildcard_imports = &units[0].wildcard_imports;

    CHECK(resolve_type_name("p2.Helper", ctx, dict) == std::string("p2.Helper"));
    CHECK(resolve_type_name("Helper", ctx, dict) == std::string("p2.Helper"));
    CHECK(resolve_type_name("String", ctx, dict) == std::nullopt);
    CHECK(resolve_type_name("User", ctx, dict) == std::string("p1.User"));
}

TEST_CASE("explicit import of an external type shadows wildcard candidates") {
    auto units = parse_all({
        "package p1; import java.util.List; import p2.*; class User { List l; }",
        "package p2; class List {}",
    });
    auto dict = build_type_dictionary(units);
    CdnGraph g = build_cdn(units, dict);
    // List is bound to java.util.List, which is external: no edge
    CHECK(g.edges().empty());
}

TEST_CASE("ambiguous wildcard imports resolve to the first and warn") {
    auto units = parse_all({
        "package p0; import p1.*; import p2.*; class User { Thing t; }",
        "package p1; class Thing {}",
        "package p2; class Thing {}",
    });
    auto dict = build_type_dictionary(units);
    std::vector<Diagnostic> diags;
    CdnGraph g = build_cdn(units, dict, &diags);
    CHECK(edge_set(g) == std::set<std::string>{"p0.User>p1.Thing:CM"});
    bool warned = std::any_of(diags.begin(), diags.end(), [](const Diagnostic& d) {
        return d.message.find("ambiguous") != std::string::npos;
    });
    CHECK(warned);
}

TEST_CASE("nested types are dictionary entries named Outer.Inner") {
    auto units = parse_all({
        "package p; class Outer { class Inner {} static class Nested { Outer.Inner i; } }",
    });
    auto dict = build_type_dictionary(units);
    CHECK(dict.contains("p.Outer"));
    CHECK(dict.contains("p.Outer.Inner"));
    CHECK(dict.contains("p.Outer.Nested"));
    CdnGraph g = build_cdn(units, dict);
    CHECK(edge_set(g) == std::set<std::string>{"p.Outer.Nested>p.Outer.Inner:CM"});
}

TEST_CASE("bare references to sibling nested types do not resolve") {
    // resolution only consults qualified names, imports, package, wildcards;
    // there is no enclosing-type scope walk
    auto units = parse_all({
        "package p; class Outer { class Inner {} static class Nested { Inner i; } }",
    });
    auto dict = build_type_dictionary(units);
    CdnGraph g = build_cdn(units, dict);
    CHECK(g.edges().empty());
}

TEST_CASE("edge-type coverage across all ten sites") {
    CdnGraph g = extract({R"java(
        @interface Marker {}
        interface Base {}
        class Parent {}
        class Target {
            public static int calc() { return 1; }
        }
        enum Color { RED, GREEN }
        @Marker
        class Everything extends Parent implements Base {
            Target member;
            static Target shared;
            Target give() { return null; }
            void take(Target t, Color c) {}
            void act() {
                Target local = new Target();
                int x = Target.calc();
            }
        }
    )java"});
    std::set<std::string> expect = {
        "Everything>Marker:A",
        "Everything>Parent:E",
        "Everything>Base:I",
        "Everything>Target:CM",
        "Everything>Target:SCM",
        "Everything>Target:R",
        "Everything>Target:P",
        "Everything>Color:P",
        "Everything>Target:V",
        "Everything>Target:OI",
        "Everything>Target:SMC",
    };
    CHECK(edge_set(g) == expect);
}

TEST_CASE("self-references are dropped") {
    CdnGraph g = extract({
        "class A { A next; A clone2() { return new A(); } }",
    });
    CHECK(g.edges().empty());
}

TEST_CASE("generic arguments are erased") {
    CdnGraph g = extract({
        "class A { List<Foo> xs; Map<Foo, Bar> m; }",
        "class List {}", "class Foo {}", "class Bar {}", "class Map {}",
    });
    CHECK(edge_set(g) == std::set<std::string>{"A>List:CM", "A>Map:CM"});
}

TEST_CASE("arrays refer to their element type") {
    CdnGraph g = extract({
        "class A { Foo[] xs; Foo[][] grid; void m(Foo... rest) { Foo[] l = new Foo[3]; } }",
        "class Foo {}",
    });
    CHECK(edge_set(g) ==
          std::set<std::string>{"A>Foo:CM", "A>Foo:P", "A>Foo:V", "A>Foo:OI"});
}

TEST_CASE("annotations on fields, methods, and parameters emit A edges") {
    CdnGraph g = extract({R"java(
        @interface Tag {}
        class A {
            @Tag int counter;
            @Tag void m(@Tag int x) {}
        }
    )java"});
    CHECK(edge_set(g) == std::set<std::string>{"A>Tag:A"});
}

TEST_CASE("files that fail to parse are skipped with a warning") {
    namespace fs = std::filesystem;
    auto dir = fs::temp_directory_path() / "cvdp_test_skip_src";
    fs::remove_all(dir);
    fs::create_directories(dir);
    {
        std::ofstream ok(dir / "Good.java");
        ok << "class Good { Bad b; }";
        std::ofstream bad(dir / "Bad.java");
        bad << "class Bad { String s = \"unterminated; }";
    }
    ExtractResult result = extract_directory(dir.string());
    CHECK(result.files_parsed == 1);
    CHECK(result.files_skipped == 1);
    CHECK(result.graph.nodes().size() == 1);
    CHECK(result.graph.edges().empty());  // Bad never made it into the dictionary
    bool warned = std::any_of(
        result.diagnostics.begin(), result.diagnostics.end(), [](const Diagnostic& d) {
            return d.message.find("skipping file") != std::string::npos;
        });
    CHECK(warned);
    fs::remove_all(dir);
}

TEST_CASE("extraction is deterministic") {
    namespace fs = std::filesystem;
    auto dir = fs::temp_directory_path() / "cvdp_test_det_src";
    fs::remove_all(dir);
    fs::create_directories(dir / "sub");
    {
        std::ofstream a(dir / "A.java");
        a << "package p; class A extends B { C c; }";
        std::ofstream b(dir / "sub" / "B.java");
        b << "package p; class B { void m() { C.go(); } }";
        std::ofstream c(dir / "C.java");
        c << "package p; class C {}";
    }
    auto r1 = extract_directory(dir.string());
    auto r2 = extract_directory(dir.string(), 4);
    CHECK(cdn_to_string(r1.graph) == cdn_to_string(r2.graph));
    CHECK(r1.graph.edges().size() == 3);
    fs::remove_all(dir);
}

TEST_CASE("parser handles control flow, casts, ternaries, and lambdas") {
    CdnGraph g = extract({R"java(
        class A {
            void m(boolean flag) {
                for (int i = 0, j = 1; i < 10; i++) { j += i; }
                for (Foo f : list()) { f.touch(); }
                try (Foo res = null) {
                    int y = flag ? Foo.make() : 0;
                } catch (Bar | Foo e) {
                    e.toString();
                }
                Runnable r = () -> { Foo.make(); };
                Object o = (Foo) null;
                while (flag) { break; }
                switch (1) { case 1: default: }
            }
            java.util.List list() { return null; }
        }
        class Foo { static int make() { return 0; } }
        class Bar {}
    )java"});
    std::set<std::string> expect = {
        "A>Foo:V",    // for-each variable and try-with-resources
        "A>Foo:SMC",  // ternary arm and lambda body
        "A>Bar:V",    // catch clause
    };
    CHECK(edge_set(g) == expect);
}

TEST_CASE("interfaces extending interfaces produce E edges") {
    CdnGraph g = extract({
        "interface A {}",
        "interface B extends A {}",
        "interface C extends A, B {}",
    });
    CHECK(edge_set(g) == std::set<std::string>{"B>A:E", "C>A:E", "C>B:E"});
}

TEST_CASE("enum constants with constructor arguments are scanned") {
    CdnGraph g = extract({R"java(
        enum Mode {
            FAST(new Tuner()), SLOW(Tuner.basic());
            Mode(Tuner t) {}
        }
        class Tuner { static Tuner basic() { return null; } }
    )java"});
    CHECK(edge_set(g) ==
          std::set<std::string>{"Mode>Tuner:OI", "Mode>Tuner:SMC", "Mode>Tuner:P"});
}

TEST_CASE("duplicate type declarations keep the first and warn") {
    auto units = parse_all({
        "package p; class A { B b; }",
        "package p; class B {}",
        "package p; class B { A a; }",  // duplicate: ignored
    });
    std::vector<Diagnostic> diags;
    auto dict = build_type_dictionary(units, &diags);
    CHECK(dict.size() == 2);
    bool warned = std::any_of(diags.begin(), diags.end(), [](const Diagnostic& d) {
        return d.message.find("duplicate type") != std::string::npos;
    });
    CHECK(warned);
    CdnGraph g = build_cdn(units, dict, &diags);
    // refs from the shadowed duplicate are not attributed
    CHECK(edge_set(g) == std::set<std::string>{"p.A>p.B:CM"});
}

TEST_CASE("extraction wall time scales roughly linearly with corpus size") {
    std::string base;
    for (int i = 0; i < 120; ++i) {
        base += "package p1; class K" + std::to_string(i) + " { ";
        for (int f = 0; f < 30; ++f) {
            base += "K" + std::to_string((i + f) % 120) + " f" + std::to_string(f) + "; ";
            base += "void m" + std::to_string(f) + "(int a, int b) { int c = a + b * 2; } ";
        }
        base += "}\n";
    }
    std::string copy = base;
    {
        std::size_t pos = 0;
        while ((pos = copy.find("p1", pos)) != std::string::npos) {
            copy.replace(pos, 2, "p2");
            pos += 2;
        }
    }
    auto run = [](const std::vector<std::string>& sources) {
        auto start = std::chrono::steady_clock::now();
        std::vector<java::ParsedUnit> units;
        for (std::size_t i = 0; i < sources.size(); ++i)
            units.push_back(java::parse_java_source(sources[i], "corpus.java"));
        auto dict = build_type_dictionary(units);
        auto g = build_cdn(units, dict);
        CHECK(g.nodes().size() >= 120);
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };
    double t1 = 1e9, t2 = 1e9;
    for (int rep = 0; rep < 3; ++rep) {
        t1 = std::min(t1, run({base}));
        t2 = std::min(t2, run({base, copy}));
    }
    CHECK(t2 / t1 < 3.0);
}

}  // TEST_SUITE
