#pragma once

#include <string>

#include "gtf/grammar.hpp"
#include "gtf/grammar_loader.hpp"

namespace gtf::test {

// --- Bison-listing fixture: simple_select / distinct_clause / target_list ---
// Exactly three rules; the remaining names resolve through the token map and
// placeholder declarations.
inline const char* kListingGrammar = R"(
simple_select:
  SELECT_SYM SCONST
          {/*extra developer defined logic...*/}
| SELECT_SYM distinct_clause target_list from_clause
          {/*extra developer defined logic...*/}
| SELECT_SYM distinct_clause target_list from_clause
        where_clause
          {/*extra developer defined logic...*/}
;

distinct_clause:
  DISTINCT_SYM {/*extra developer defined logic...*/}
;

target_list:
  target_elem {/*extra developer defined logic...*/}
| target_list ',' target_elem
        {/*extra developer defined logic...*/}
;
)";

inline const char* kListingTokens =
    "SELECT_SYM\tSELECT\n"
    "DISTINCT_SYM\tDISTINCT\n"
    "from_clause\tFROM_CLAUSE\n"
    "where_clause\tWHERE_CLAUSE\n";

inline const char* kListingPlaceholders =
    "SCONST StringConst\n"
    "target_elem ExistingColumn\n";

inline Grammar listing_grammar() {
    return load_grammar(kListingGrammar, kListingTokens, kListingPlaceholders);
}

// Render-oriented variant where from_clause expands to FROM <table>.
inline const char* kListingGrammarFull = R"(
simple_select:
  SELECT_SYM SCONST
| SELECT_SYM distinct_clause target_list from_clause
| SELECT_SYM distinct_clause target_list from_clause where_clause
;
distinct_clause: DISTINCT_SYM ;
target_list: target_elem | target_list ',' target_elem ;
from_clause: FROM_SYM TABLE_NAME ;
where_clause: WHERE_SYM TRUE_SYM ;
)";

inline const char* kListingTokensFull =
    "SELECT_SYM\tSELECT\n"
    "DISTINCT_SYM\tDISTINCT\n"
    "FROM_SYM\tFROM\n"
    "WHERE_SYM\tWHERE\n"
    "TRUE_SYM\tTRUE\n";

inline const char* kListingPlaceholdersFull =
    "SCONST StringConst\n"
    "target_elem ExistingColumn\n"
    "TABLE_NAME ExistingTable\n";

inline Grammar listing_grammar_full() {
    return load_grammar(kListingGrammarFull, kListingTokensFull, kListingPlaceholdersFull);
}

// --- Simple-rule fixture: natural_join_type / opt_inner ---------------------
inline const char* kSimpleRuleGrammar = R"(
natural_join_type:
  NATURAL_SYM opt_inner JOIN_SYM /* simple rule */
;

opt_inner:

| INNER_SYM /* syntax termination */
;
)";

inline const char* kSimpleRuleTokens =
    "NATURAL_SYM\tNATURAL\n"
    "JOIN_SYM\tJOIN\n"
    "INNER_SYM\tINNER\n";

inline Grammar simple_rule_grammar() {
    return load_grammar(kSimpleRuleGrammar, kSimpleRuleTokens);
}

// --- Rule-prioritization fixture --------------------------------------------
// table_reference's first alternative must come out Normal: table_factor
// reaches both a one-step termination (table_name) and a deeper but finite
// expansion (table_function), and never loops back to table_reference.
inline const char* kPrioritizationGrammar = R"(
table_reference:
  table_factor   /* normal rule, preferred */
| joined_table   /* complex rule */
;

table_factor:
  table_name     /* simple rule, preferred */
| table_function /* complex rule */
;

joined_table:
  table_reference inner_join_type table_reference
| table_reference outer_join_type table_reference
;

table_name: TABLE_NAME ;
table_function: FUNC_SYM '(' func_arg ')' ;
func_arg: TABLE_NAME | INT_NUM ;
inner_join_type: INNER_SYM JOIN_SYM ;
outer_join_type: OUTER_SYM JOIN_SYM ;
)";

inline const char* kPrioritizationTokens =
    "FUNC_SYM\tTBLFN\n"
    "INNER_SYM\tINNER\n"
    "OUTER_SYM\tOUTER\n"
    "JOIN_SYM\tJOIN\n";

inline const char* kPrioritizationPlaceholders =
    "TABLE_NAME ExistingTable\n"
    "INT_NUM IntConst\n";

inline Grammar prioritization_grammar() {
    return load_grammar(kPrioritizationGrammar, kPrioritizationTokens,
                        kPrioritizationPlaceholders);
}

// --- a_expr-style self-recursive fixture ------------------------------------
inline const char* kRecursiveGrammar = R"(
a_expr:
  a_expr '+' a_expr
| a_expr AT_SYM TIME_SYM ZONE_SYM a_expr
| a_expr COLLATE_SYM any_name
| VALUE_NUM
;
any_name: NAME_IDENT ;
)";

inline const char* kRecursiveTokens =
    "AT_SYM\tAT\n"
    "TIME_SYM\tTIME\n"
    "ZONE_SYM\tZONE\n"
    "COLLATE_SYM\tCOLLATE\n";

inline const char* kRecursivePlaceholders =
    "VALUE_NUM IntConst\n"
    "NAME_IDENT Identifier\n";

inline Grammar recursive_grammar() {
    return load_grammar(kRecursiveGrammar, kRecursiveTokens, kRecursivePlaceholders);
}

// --- shipped toy SQL grammar -------------------------------------------------
inline std::string data_path(const std::string& name) {
    return std::string(GTF_DATA_DIR) + "/" + name;
}

inline Grammar toy_grammar() {
    return load_grammar_files(data_path("toy.y"), data_path("toy.tok"),
                              data_path("toy.placeholders"));
}

}  // namespace gtf::test
