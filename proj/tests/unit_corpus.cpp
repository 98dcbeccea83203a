#include "jetform/corpus.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

using namespace jetform;

TEST_CASE("corpus cases are enumerable and documents load") {
    CHECK(corpus_case_names().size() == 5);
    for (const std::string& name : corpus_case_names()) {
        const CorpusCase& c = corpus_case(name);
        CHECK(c.documents.count("lagrangian") == 1);
        // Every bundled document must pass its schema.
        lagrangian_from_json(c.doc("lagrangian"));
        characteristic_from_json(c.doc("characteristic"));
        eom_from_json(c.doc("eom"));
    }
    CHECK_THROWS_AS(corpus_case("nosuch"), SchemaError);
}

TEST_CASE("fast corpus cases pass end to end") {
    for (const char* name : {"zero-demo", "sg"}) {
        Report report = corpus_run(name);
        INFO(report.text());
        CHECK(report.all_pass());
    }
}
