#include "gtf/toy_db.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <optional>
#include <vector>

namespace gtf {

namespace {

// ---------------------------------------------------------------------------
// Probe ids. Logical ids are stable; the harness spreads them over the map.
// ---------------------------------------------------------------------------

enum Probe : uint32_t {
    P_STMT_CREATE_TABLE = 1,
    P_STMT_INSERT,
    P_STMT_CREATE_INDEX,
    P_STMT_SELECT,
    P_STMT_UPDATE,
    P_STMT_DELETE,
    P_STMT_DROP_TABLE,
    P_STMT_DROP_INDEX,
    P_SYNTAX_ERROR,

    P_SEM_DUP_TABLE = 16,
    P_SEM_UNKNOWN_TABLE,
    P_SEM_NO_COLUMNS,
    P_SEM_DUP_COLUMN,
    P_SEM_TOO_MANY_COLUMNS,
    P_SEM_UNKNOWN_COLUMN,
    P_SEM_ARITY,
    P_SEM_ROW_CAP,
    P_SEM_TABLE_CAP,
    P_SEM_DUP_INDEX,
    P_SEM_UNKNOWN_INDEX,
    P_SEM_USING_MISSING,
    P_SEM_NATURAL_USING,
    P_SEM_NEGATIVE_LIMIT,
    P_SEM_DIV_ZERO,
    P_SEM_JOIN_CAP,
    P_SEM_SUBQUERY_DEPTH,
    P_SEM_AMBIGUOUS_COLUMN,
    P_SEM_GROUP_UNKNOWN,

    P_CT_TEMPORARY = 40,
    P_CT_IF_NOT_EXISTS,
    P_CT_HAS_INDEX,
    P_CT_COL_INT,
    P_CT_COL_FLOAT,
    P_CT_COL_TEXT,
    P_CT_NOT_NULL,
    P_CT_UNIQUE_COL,
    P_CT_DEFAULT,
    P_CT_COLS,        // hit once per column
    P_CT_EXPR_PART,
    P_CT_MIXED_PARTS,
    P_CT_IFNE_DUP,    // IF NOT EXISTS suppressed a duplicate

    P_CI_UNIQUE = 56,
    P_CI_EXPR_PART,
    P_CI_MIXED_PARTS,
    P_CI_PARTS,       // hit once per key part

    P_INS_COL_LIST = 64,
    P_INS_ROWS,       // hit once per row
    P_INS_NULL,
    P_INS_NEG_INT,
    P_INS_BOUNDARY_INT,
    P_INS_FLOAT,
    P_INS_STRING,
    P_INS_PADDED,

    P_SEL_DISTINCT = 76,
    P_SEL_STAR,
    P_SEL_ITEMS,      // hit once per select item
    P_SEL_ALIAS,
    P_SEL_JOIN,
    P_SEL_MULTI_JOIN,
    P_SEL_TABLE_ALIAS,
    P_SEL_WHERE,
    P_SEL_GROUP,
    P_SEL_ORDER,
    P_SEL_ORDER_ASC,
    P_SEL_ORDER_DESC,
    P_SEL_LIMIT,
    P_SEL_ROWS_OUT,   // hit once per result row
    P_SEL_ROWS_SCAN,  // hit once per scanned row
    P_SEL_EMPTY_SUB,  // scalar subquery produced NULL

    P_JOIN_BARE = 96,
    P_JOIN_INNER,
    P_JOIN_LEFT,
    P_JOIN_RIGHT,
    P_JOIN_OUTER,
    P_JOIN_CROSS,
    P_JOIN_NATURAL,
    P_JOIN_ON,
    P_JOIN_USING,
    P_JOIN_NATURAL_NO_COMMON,

    P_EX_QUALIFIED = 112,
    P_EX_COLLATE_NOCASE,
    P_EX_COLLATE_BINARY,
    P_EX_CAST_INT,
    P_EX_CAST_FLOAT,
    P_EX_CAST_TEXT,
    P_EX_FUNC_ABS,
    P_EX_FUNC_LENGTH,
    P_EX_FUNC_UPPER,
    P_EX_FUNC_LOWER,
    P_EX_LIKE,
    P_EX_NOT,
    P_EX_NOT_NOT,
    P_EX_SUBQUERY,
    P_EX_NULL_CMP,
    P_EX_INT_DIV,
    P_EX_CAST_BAD_TEXT,
    P_EX_ABS_TEXT,

    P_CMP_EQ = 136,
    P_CMP_NE,
    P_CMP_LT,
    P_CMP_GT,
    P_CMP_LE,
    P_CMP_GE,
    P_ARITH_ADD,
    P_ARITH_SUB,
    P_ARITH_MUL,
    P_ARITH_DIV,

    P_UPD_ASSIGNS = 152,  // hit once per assignment
    P_UPD_WHERE,
    P_UPD_ROWS,           // hit once per updated row
    P_UPD_COERCE_IF,      // int value into float column
    P_UPD_COERCE_FI,
    P_UPD_COERCE_TEXT,

    P_DEL_WHERE = 164,
    P_DEL_ROWS,  // hit once per deleted row

    P_DROP_IF_EXISTS = 168,
    P_DROP_TEMP_TABLE,
    P_DROP_INDEX_OK,

    P_DERIVED_TABLE = 176,
    P_DERIVED_EMPTY,

    // Combination probes over the rare feature set; bases leave room for the
    // combinatorial blocks.
    P_PAIR_BASE = 200,    // C(10,2) = 45
    P_TRIPLE_BASE = 300,  // C(9,3)  = 84
    P_QUAD_BASE = 450,    // C(7,4)  = 35
};

// Rare features, index order matters for the combination probes:
// 0 NATURAL, 1 OUTER, 2 USING, 3 derived table, 4 scalar subquery,
// 5 COLLATE, 6 CAST, 7 LIKE, 8 NOT NOT, 9 ORDER..DESC
constexpr int kRareCount = 10;

constexpr size_t kMaxTables = 32;
constexpr size_t kMaxColumns = 16;
constexpr size_t kMaxRows = 512;
constexpr size_t kMaxJoinRows = 2048;
constexpr int kMaxSubqueryDepth = 8;

// ---------------------------------------------------------------------------
// Values
// ---------------------------------------------------------------------------

enum class ColType { Int, Float, Text };

struct Value {
    enum class T { Null, Int, Float, Text } t = T::Null;
    int64_t i = 0;
    double f = 0.0;
    std::string s;

    static Value null() { return {}; }
    static Value of_int(int64_t v) { Value x; x.t = T::Int; x.i = v; return x; }
    static Value of_float(double v) { Value x; x.t = T::Float; x.f = v; return x; }
    static Value of_text(std::string v) { Value x; x.t = T::Text; x.s = std::move(v); return x; }

    bool is_null() const { return t == T::Null; }
    bool numeric() const { return t == T::Int || t == T::Float; }
    double as_double() const { return t == T::Int ? double(i) : f; }
};

std::string value_text(const Value& v) {
    switch (v.t) {
        case Value::T::Null: return "NULL";
        case Value::T::Int: return std::to_string(v.i);
        case Value::T::Float: {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.6g", v.f);
            return buf;
        }
        case Value::T::Text: return v.s;
    }
    return "";
}

bool value_equal(const Value& a, const Value& b) {
    if (a.is_null() || b.is_null()) return a.is_null() && b.is_null();
    if (a.numeric() && b.numeric()) return a.as_double() == b.as_double();
    if (a.t == Value::T::Text && b.t == Value::T::Text) return a.s == b.s;
    return false;
}

// NULLs first, then numerics, then text.
int value_compare(const Value& a, const Value& b) {
    auto rank = [](const Value& v) { return v.is_null() ? 0 : (v.numeric() ? 1 : 2); };
    if (rank(a) != rank(b)) return rank(a) < rank(b) ? -1 : 1;
    if (a.is_null()) return 0;
    if (a.numeric()) {
        double x = a.as_double(), y = b.as_double();
        return x < y ? -1 : (x > y ? 1 : 0);
    }
    return a.s < b.s ? -1 : (a.s > b.s ? 1 : 0);
}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

struct ToySyntaxError {};
struct ToySemanticError {
    uint32_t probe;
};
struct ToyBug {
    uint32_t probe;
    const char* name;
    bool is_assert;
};

struct Tok {
    enum K { Word, Int, Float, Str, Punct, End } k = End;
    std::string text;
    int64_t i = 0;
    double f = 0.0;
};

std::vector<Tok> lex(const std::string& src) {
    std::vector<Tok> out;
    size_t p = 0;
    auto peek = [&](size_t off) -> char { return p + off < src.size() ? src[p + off] : '\0'; };
    while (p < src.size()) {
        char c = src[p];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++p;
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t s = p;
            while (p < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[p])) || src[p] == '_'))
                ++p;
            Tok t;
            t.k = Tok::Word;
            t.text = src.substr(s, p - s);
            out.push_back(std::move(t));
            continue;
        }
        bool neg = c == '-' && std::isdigit(static_cast<unsigned char>(peek(1)));
        if (std::isdigit(static_cast<unsigned char>(c)) || neg) {
            size_t s = p;
            if (neg) ++p;
            while (p < src.size() && std::isdigit(static_cast<unsigned char>(src[p]))) ++p;
            bool is_float = false;
            if (p < src.size() && src[p] == '.' &&
                std::isdigit(static_cast<unsigned char>(peek(1)))) {
                is_float = true;
                ++p;
                while (p < src.size() && std::isdigit(static_cast<unsigned char>(src[p]))) ++p;
            }
            Tok t;
            t.text = src.substr(s, p - s);
            if (is_float) {
                t.k = Tok::Float;
                t.f = std::strtod(t.text.c_str(), nullptr);
            } else {
                t.k = Tok::Int;
                t.i = std::strtoll(t.text.c_str(), nullptr, 10);
            }
            out.push_back(std::move(t));
            continue;
        }
        if (c == '\'') {
            ++p;
            std::string content;
            for (;;) {
                if (p >= src.size()) throw ToySyntaxError{};
                if (src[p] == '\'') {
                    if (peek(1) == '\'') {  // doubled quote escape
                        content.push_back('\'');
                        p += 2;
                        continue;
                    }
                    ++p;
                    break;
                }
                content.push_back(src[p++]);
            }
            Tok t;
            t.k = Tok::Str;
            t.text = std::move(content);
            out.push_back(std::move(t));
            continue;
        }
        // Punctuation, longest match first.
        static const char* puncts[] = {"<=", ">=", "!=", "(", ")", ",", ".", "*",
                                       "+",  "-",  "/",  "=", "<", ">"};
        bool matched = false;
        for (const char* q : puncts) {
            size_t len = std::strlen(q);
            if (src.compare(p, len, q) == 0) {
                Tok t;
                t.k = Tok::Punct;
                t.text = q;
                out.push_back(std::move(t));
                p += len;
                matched = true;
                break;
            }
        }
        if (!matched) throw ToySyntaxError{};
    }
    out.push_back(Tok{});
    return out;
}

// ---------------------------------------------------------------------------
// AST
// ---------------------------------------------------------------------------

struct SelectStmt;

enum class CmpOp { Eq, Ne, Lt, Gt, Le, Ge, Like };
enum class ArithOp { Add, Sub, Mul, Div };
enum class JoinKind { Bare, Inner, Left, Right, Outer, Cross, Natural };

struct Expr {
    enum class K {
        Column, Qualified, IntLit, FloatLit, StrLit, Null,
        Or, And, Not, Cmp, Arith, Collate, Func, Cast, Subquery
    } k;
    std::string name;        // column / qualified column / function
    std::string table;       // qualified table
    Value lit;
    CmpOp cmp{};
    ArithOp arith{};
    bool nocase = false;     // Collate
    ColType cast_to{};       // Cast
    std::unique_ptr<Expr> a, b;
    std::unique_ptr<SelectStmt> sub;
};
using ExprPtr = std::unique_ptr<Expr>;

struct KeyPart {
    bool is_expr = false;
    std::string column;
    ExprPtr expr;
};

struct IndexDef {
    std::string name;
    std::vector<KeyPart> parts;
};

struct ColumnDef {
    std::string name;
    ColType type = ColType::Int;
    enum class C { None, NotNull, Unique, Default } constraint = C::None;
    Value def;
};

struct CreateTable {
    bool temporary = false, if_not_exists = false;
    std::string name;
    std::vector<ColumnDef> cols;
    std::vector<IndexDef> indexes;
};

struct CreateIndex {
    bool unique = false;
    std::string name, table;
    std::vector<KeyPart> parts;
};

struct Insert {
    std::string table;
    std::vector<std::string> columns;
    std::vector<std::vector<Value>> rows;
};

struct TablePrimary {
    bool derived = false;
    std::string name;    // table name, or the alias for derived tables
    std::string alias;   // optional alias over a named table
    std::unique_ptr<SelectStmt> sub;
};

struct JoinSeg {
    JoinKind kind = JoinKind::Bare;
    TablePrimary right;
    int spec = 0;  // 0 none, 1 ON, 2 USING
    ExprPtr on;
    std::vector<std::string> using_cols;
};

struct TableRef {
    TablePrimary first;
    std::vector<JoinSeg> segs;
};

struct OrderItem {
    ExprPtr e;
    int dir = 0;  // 0 none, 1 ASC, 2 DESC
};

struct SelectStmt {
    bool distinct = false, star = false;
    std::vector<std::pair<ExprPtr, std::string>> items;
    TableRef from;
    ExprPtr where;
    std::vector<std::string> group;
    std::vector<OrderItem> order;
    bool has_limit = false;
    int64_t limit = 0;
};

struct Update {
    std::string table;
    std::vector<std::pair<std::string, ExprPtr>> assigns;
    ExprPtr where;
};

struct Delete {
    std::string table;
    ExprPtr where;
};

struct DropTable {
    bool if_exists = false;
    std::string name;
};

struct DropIndex {
    std::string name;
};

struct Statement {
    enum class K { CreateTable, CreateIndex, Insert, Select, Update, Delete, DropTable, DropIndex } k;
    CreateTable create_table;
    CreateIndex create_index;
    Insert insert;
    std::unique_ptr<SelectStmt> select;
    Update update;
    Delete del;
    DropTable drop_table;
    DropIndex drop_index;
};

// ---------------------------------------------------------------------------
// Parser (recursive descent with precedence climbing for expressions)
// ---------------------------------------------------------------------------

struct Parser {
    const std::vector<Tok>& toks;
    size_t p = 0;
    int nesting = 0;

    struct NestGuard {
        Parser& pr;
        explicit NestGuard(Parser& p_) : pr(p_) {
            if (++pr.nesting > 64) throw ToySyntaxError{};
        }
        ~NestGuard() { --pr.nesting; }
    };

    const Tok& cur() const { return toks[p]; }
    const Tok& ahead(size_t n) const { return toks[std::min(p + n, toks.size() - 1)]; }

    bool is_word(const char* w) const { return cur().k == Tok::Word && cur().text == w; }
    bool is_punct(const char* w) const { return cur().k == Tok::Punct && cur().text == w; }

    bool eat_word(const char* w) {
        if (!is_word(w)) return false;
        ++p;
        return true;
    }
    bool eat_punct(const char* w) {
        if (!is_punct(w)) return false;
        ++p;
        return true;
    }
    void expect_word(const char* w) {
        if (!eat_word(w)) throw ToySyntaxError{};
    }
    void expect_punct(const char* w) {
        if (!eat_punct(w)) throw ToySyntaxError{};
    }

    static bool is_keyword(const std::string& w) {
        static const char* kws[] = {
            "CREATE", "TABLE", "TEMPORARY", "IF", "NOT", "EXISTS", "INDEX", "UNIQUE", "ON",
            "INSERT", "INTO", "VALUES", "SELECT", "DISTINCT", "FROM", "WHERE", "GROUP", "BY",
            "ORDER", "ASC", "DESC", "LIMIT", "JOIN", "INNER", "LEFT", "RIGHT", "OUTER", "CROSS",
            "NATURAL", "USING", "AND", "OR", "NULL", "INT", "FLOAT", "TEXT", "DEFAULT", "SET",
            "UPDATE", "DELETE", "DROP", "CAST", "AS", "COLLATE", "NOCASE", "BINARY", "ABS",
            "LENGTH", "UPPER", "LOWER", "LIKE"};
        for (const char* k : kws)
            if (w == k) return true;
        return false;
    }

    std::string identifier() {
        if (cur().k != Tok::Word || is_keyword(cur().text)) throw ToySyntaxError{};
        return toks[p++].text;
    }

    Statement statement() {
        Statement st{};
        if (is_word("CREATE")) {
            // CREATE [TEMPORARY] TABLE ... | CREATE [UNIQUE] INDEX ...
            if (ahead(1).k == Tok::Word &&
                (ahead(1).text == "INDEX" || ahead(1).text == "UNIQUE")) {
                st.k = Statement::K::CreateIndex;
                st.create_index = create_index();
            } else {
                st.k = Statement::K::CreateTable;
                st.create_table = create_table();
            }
        } else if (eat_word("INSERT")) {
            st.k = Statement::K::Insert;
            st.insert = insert_body();
        } else if (is_word("SELECT")) {
            st.k = Statement::K::Select;
            st.select = std::make_unique<SelectStmt>(select_stmt());
        } else if (eat_word("UPDATE")) {
            st.k = Statement::K::Update;
            st.update = update_body();
        } else if (eat_word("DELETE")) {
            st.k = Statement::K::Delete;
            st.del = delete_body();
        } else if (eat_word("DROP")) {
            if (eat_word("TABLE")) {
                st.k = Statement::K::DropTable;
                if (eat_word("IF")) {
                    expect_word("EXISTS");
                    st.drop_table.if_exists = true;
                }
                st.drop_table.name = identifier();
            } else if (eat_word("INDEX")) {
                st.k = Statement::K::DropIndex;
                st.drop_index.name = identifier();
            } else {
                throw ToySyntaxError{};
            }
        } else {
            throw ToySyntaxError{};
        }
        if (cur().k != Tok::End) throw ToySyntaxError{};
        return st;
    }

    CreateTable create_table() {
        CreateTable ct;
        expect_word("CREATE");
        ct.temporary = eat_word("TEMPORARY");
        expect_word("TABLE");
        if (eat_word("IF")) {
            expect_word("NOT");
            expect_word("EXISTS");
            ct.if_not_exists = true;
        }
        ct.name = identifier();
        expect_punct("(");
        do {
            if (eat_word("INDEX")) {
                IndexDef ix;
                ix.name = identifier();
                expect_punct("(");
                ix.parts = key_parts();
                expect_punct(")");
                ct.indexes.push_back(std::move(ix));
            } else {
                ColumnDef cd;
                cd.name = identifier();
                if (eat_word("INT")) cd.type = ColType::Int;
                else if (eat_word("FLOAT")) cd.type = ColType::Float;
                else if (eat_word("TEXT")) cd.type = ColType::Text;
                else throw ToySyntaxError{};
                if (eat_word("NOT")) {
                    expect_word("NULL");
                    cd.constraint = ColumnDef::C::NotNull;
                } else if (eat_word("UNIQUE")) {
                    cd.constraint = ColumnDef::C::Unique;
                } else if (eat_word("DEFAULT")) {
                    cd.constraint = ColumnDef::C::Default;
                    cd.def = const_value();
                }
                ct.cols.push_back(std::move(cd));
            }
        } while (eat_punct(","));
        expect_punct(")");
        return ct;
    }

    std::vector<KeyPart> key_parts() {
        std::vector<KeyPart> parts;
        do {
            KeyPart kp;
            if (eat_punct("(")) {
                kp.is_expr = true;
                kp.expr = expr();
                expect_punct(")");
            } else {
                kp.column = identifier();
            }
            parts.push_back(std::move(kp));
        } while (eat_punct(","));
        return parts;
    }

    CreateIndex create_index() {
        CreateIndex ci;
        expect_word("CREATE");
        ci.unique = eat_word("UNIQUE");
        expect_word("INDEX");
        ci.name = identifier();
        expect_word("ON");
        ci.table = identifier();
        expect_punct("(");
        ci.parts = key_parts();
        expect_punct(")");
        return ci;
    }

    Value const_value() {
        if (cur().k == Tok::Int) return Value::of_int(toks[p++].i);
        if (cur().k == Tok::Float) return Value::of_float(toks[p++].f);
        if (cur().k == Tok::Str) return Value::of_text(toks[p++].text);
        if (eat_word("NULL")) return Value::null();
        throw ToySyntaxError{};
    }

    Insert insert_body() {
        Insert ins;
        expect_word("INTO");
        ins.table = identifier();
        if (eat_punct("(")) {
            do ins.columns.push_back(identifier());
            while (eat_punct(","));
            expect_punct(")");
        }
        expect_word("VALUES");
        do {
            expect_punct("(");
            std::vector<Value> row;
            do row.push_back(const_value());
            while (eat_punct(","));
            expect_punct(")");
            ins.rows.push_back(std::move(row));
        } while (eat_punct(","));
        return ins;
    }

    SelectStmt select_stmt() {
        NestGuard guard(*this);
        SelectStmt s;
        expect_word("SELECT");
        s.distinct = eat_word("DISTINCT");
        if (is_punct("*") && ahead(1).k == Tok::Word && ahead(1).text == "FROM") {
            s.star = true;
            ++p;
        } else {
            do {
                auto e = expr();
                std::string alias;
                if (eat_word("AS")) alias = identifier();
                s.items.emplace_back(std::move(e), std::move(alias));
            } while (eat_punct(","));
        }
        expect_word("FROM");
        s.from = table_ref();
        if (eat_word("WHERE")) s.where = expr();
        if (eat_word("GROUP")) {
            expect_word("BY");
            do s.group.push_back(identifier());
            while (eat_punct(","));
        }
        if (eat_word("ORDER")) {
            expect_word("BY");
            do {
                OrderItem oi;
                oi.e = expr();
                if (eat_word("ASC")) oi.dir = 1;
                else if (eat_word("DESC")) oi.dir = 2;
                s.order.push_back(std::move(oi));
            } while (eat_punct(","));
        }
        if (eat_word("LIMIT")) {
            if (cur().k != Tok::Int) throw ToySyntaxError{};
            s.has_limit = true;
            s.limit = toks[p++].i;
        }
        return s;
    }

    Update update_body() {
        Update u;
        u.table = identifier();
        expect_word("SET");
        do {
            std::string col = identifier();
            expect_punct("=");
            u.assigns.emplace_back(std::move(col), expr());
        } while (eat_punct(","));
        if (eat_word("WHERE")) u.where = expr();
        return u;
    }

    Delete delete_body() {
        Delete d;
        expect_word("FROM");
        d.table = identifier();
        if (eat_word("WHERE")) d.where = expr();
        return d;
    }

    TablePrimary table_primary() {
        TablePrimary tp;
        if (eat_punct("(")) {
            tp.derived = true;
            tp.sub = std::make_unique<SelectStmt>(select_stmt());
            expect_punct(")");
            expect_word("AS");
            tp.name = identifier();
        } else {
            tp.name = identifier();
            if (eat_word("AS")) tp.alias = identifier();
        }
        return tp;
    }

    bool at_join_start() const {
        if (cur().k != Tok::Word) return false;
        const std::string& w = cur().text;
        return w == "JOIN" || w == "INNER" || w == "LEFT" || w == "RIGHT" || w == "OUTER" ||
               w == "CROSS" || w == "NATURAL";
    }

    TableRef table_ref() {
        TableRef tr;
        tr.first = table_primary();
        size_t spec_budget = 0;
        while (at_join_start()) {
            JoinSeg seg;
            if (eat_word("INNER")) seg.kind = JoinKind::Inner;
            else if (eat_word("LEFT")) seg.kind = JoinKind::Left;
            else if (eat_word("RIGHT")) seg.kind = JoinKind::Right;
            else if (eat_word("OUTER")) seg.kind = JoinKind::Outer;
            else if (eat_word("CROSS")) seg.kind = JoinKind::Cross;
            else if (eat_word("NATURAL")) seg.kind = JoinKind::Natural;
            expect_word("JOIN");
            seg.right = table_primary();
            ++spec_budget;
            // Right-nested derivations flatten to spec runs; each run may not
            // exceed the joins seen so far.
            while ((is_word("ON") || is_word("USING")) && spec_budget > 0) {
                --spec_budget;
                JoinSeg* host = &seg;
                if (host->spec != 0) {
                    // Attach to the nearest enclosing join without a spec.
                    for (auto it = tr.segs.rbegin(); it != tr.segs.rend(); ++it)
                        if (it->spec == 0) {
                            host = &*it;
                            break;
                        }
                }
                if (eat_word("ON")) {
                    host->spec = 1;
                    host->on = expr();
                } else {
                    expect_word("USING");
                    host->spec = 2;
                    expect_punct("(");
                    do host->using_cols.push_back(identifier());
                    while (eat_punct(","));
                    expect_punct(")");
                }
            }
            tr.segs.push_back(std::move(seg));
        }
        return tr;
    }

    // Precedence climbing: OR < AND < NOT < cmp < add < mul; COLLATE binds
    // tightest as a postfix.
    ExprPtr expr() {
        NestGuard guard(*this);
        return or_expr();
    }

    ExprPtr or_expr() {
        auto lhs = and_expr();
        while (eat_word("OR")) {
            auto e = std::make_unique<Expr>();
            e->k = Expr::K::Or;
            e->a = std::move(lhs);
            e->b = and_expr();
            lhs = std::move(e);
        }
        return lhs;
    }

    ExprPtr and_expr() {
        auto lhs = not_expr();
        while (eat_word("AND")) {
            auto e = std::make_unique<Expr>();
            e->k = Expr::K::And;
            e->a = std::move(lhs);
            e->b = not_expr();
            lhs = std::move(e);
        }
        return lhs;
    }

    ExprPtr not_expr() {
        if (eat_word("NOT")) {
            auto e = std::make_unique<Expr>();
            e->k = Expr::K::Not;
            e->a = not_expr();
            return e;
        }
        return cmp_expr();
    }

    ExprPtr cmp_expr() {
        auto lhs = add_expr();
        for (;;) {
            CmpOp op;
            if (eat_punct("=")) op = CmpOp::Eq;
            else if (eat_punct("!=")) op = CmpOp::Ne;
            else if (eat_punct("<=")) op = CmpOp::Le;
            else if (eat_punct(">=")) op = CmpOp::Ge;
            else if (eat_punct("<")) op = CmpOp::Lt;
            else if (eat_punct(">")) op = CmpOp::Gt;
            else if (eat_word("LIKE")) op = CmpOp::Like;
            else break;
            auto e = std::make_unique<Expr>();
            e->k = Expr::K::Cmp;
            e->cmp = op;
            e->a = std::move(lhs);
            e->b = add_expr();
            lhs = std::move(e);
        }
        return lhs;
    }

    ExprPtr add_expr() {
        auto lhs = mul_expr();
        for (;;) {
            ArithOp op;
            if (eat_punct("+")) op = ArithOp::Add;
            else if (eat_punct("-")) op = ArithOp::Sub;
            else break;
            auto e = std::make_unique<Expr>();
            e->k = Expr::K::Arith;
            e->arith = op;
            e->a = std::move(lhs);
            e->b = mul_expr();
            lhs = std::move(e);
        }
        return lhs;
    }

    ExprPtr mul_expr() {
        auto lhs = postfix_expr();
        for (;;) {
            ArithOp op;
            if (eat_punct("*")) op = ArithOp::Mul;
            else if (eat_punct("/")) op = ArithOp::Div;
            else break;
            auto e = std::make_unique<Expr>();
            e->k = Expr::K::Arith;
            e->arith = op;
            e->a = std::move(lhs);
            e->b = postfix_expr();
            lhs = std::move(e);
        }
        return lhs;
    }

    ExprPtr postfix_expr() {
        auto lhs = primary_expr();
        while (eat_word("COLLATE")) {
            auto e = std::make_unique<Expr>();
            e->k = Expr::K::Collate;
            if (eat_word("NOCASE")) e->nocase = true;
            else if (eat_word("BINARY")) e->nocase = false;
            else throw ToySyntaxError{};
            e->a = std::move(lhs);
            lhs = std::move(e);
        }
        return lhs;
    }

    ExprPtr primary_expr() {
        auto e = std::make_unique<Expr>();
        if (cur().k == Tok::Int) {
            e->k = Expr::K::IntLit;
            e->lit = Value::of_int(toks[p++].i);
            return e;
        }
        if (cur().k == Tok::Float) {
            e->k = Expr::K::FloatLit;
            e->lit = Value::of_float(toks[p++].f);
            return e;
        }
        if (cur().k == Tok::Str) {
            e->k = Expr::K::StrLit;
            e->lit = Value::of_text(toks[p++].text);
            return e;
        }
        if (eat_word("NULL")) {
            e->k = Expr::K::Null;
            return e;
        }
        if (eat_punct("(")) {
            if (is_word("SELECT")) {
                e->k = Expr::K::Subquery;
                e->sub = std::make_unique<SelectStmt>(select_stmt());
            } else {
                e = expr();
            }
            expect_punct(")");
            return e;
        }
        if (is_word("CAST")) {
            ++p;
            expect_punct("(");
            e->k = Expr::K::Cast;
            e->a = expr();
            expect_word("AS");
            if (eat_word("INT")) e->cast_to = ColType::Int;
            else if (eat_word("FLOAT")) e->cast_to = ColType::Float;
            else if (eat_word("TEXT")) e->cast_to = ColType::Text;
            else throw ToySyntaxError{};
            expect_punct(")");
            return e;
        }
        if (is_word("ABS") || is_word("LENGTH") || is_word("UPPER") || is_word("LOWER")) {
            e->k = Expr::K::Func;
            e->name = toks[p++].text;
            expect_punct("(");
            e->a = expr();
            expect_punct(")");
            return e;
        }
        // column or table.column
        std::string first = identifier();
        if (eat_punct(".")) {
            e->k = Expr::K::Qualified;
            e->table = first;
            e->name = identifier();
        } else {
            e->k = Expr::K::Column;
            e->name = first;
        }
        return e;
    }
};

}  // namespace

// ---------------------------------------------------------------------------
// Database state and execution
// ---------------------------------------------------------------------------

struct ToyDatabase::Impl {
    struct IndexInfo {
        std::string name;
        bool unique = false;
        size_t plain_parts = 0, expr_parts = 0;
    };
    struct Table {
        std::string name;
        bool temporary = false;
        std::vector<ColumnDef> cols;
        std::vector<std::vector<Value>> rows;
        std::vector<IndexInfo> indexes;
    };

    std::vector<Table> tables;
    ProbeSink* sink = nullptr;

    void hit(uint32_t probe) { sink->hit(probe); }

    Table* find_table(const std::string& name) {
        for (auto& t : tables)
            if (t.name == name) return &t;
        return nullptr;
    }

    // --- feature tracking for the combination probes -----------------------

    struct Features {
        bool rare[kRareCount] = {};
        bool distinct = false;
    };

    void fire_combos(const Features& f) {
        int idx[kRareCount];
        int n = 0;
        for (int i = 0; i < kRareCount; ++i)
            if (f.rare[i]) idx[n++] = i;
        // pairs over all 10
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
                hit(P_PAIR_BASE + pair_index(idx[a], idx[b]));
        // triples over features 0..8
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
                for (int c = b + 1; c < n; ++c)
                    if (idx[c] <= 8) hit(P_TRIPLE_BASE + triple_index(idx[a], idx[b], idx[c]));
        // quads over features 0..6
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
                for (int c = b + 1; c < n; ++c)
                    for (int d = c + 1; d < n; ++d)
                        if (idx[d] <= 6)
                            hit(P_QUAD_BASE + quad_index(idx[a], idx[b], idx[c], idx[d]));
    }

    static int pair_index(int i, int j) {
        // i<j over 10 features
        return i * (2 * kRareCount - i - 1) / 2 + (j - i - 1);
    }
    static int triple_index(int i, int j, int k) {
        // combinatorial number system over 9 features
        auto c2 = [](int x) { return x * (x - 1) / 2; };
        auto c3 = [](int x) { return x * (x - 1) * (x - 2) / 6; };
        return c3(9) - c3(9 - i) + c2(9 - i - 1) - c2(9 - j) + (k - j - 1);
    }
    static int quad_index(int i, int j, int k, int l) {
        int rank = 0;
        for (int a = 0; a < 7; ++a)
            for (int b = a + 1; b < 7; ++b)
                for (int c = b + 1; c < 7; ++c)
                    for (int d = c + 1; d < 7; ++d) {
                        if (a == i && b == j && c == k && d == l) return rank;
                        ++rank;
                    }
        return rank;
    }

    void scan_expr_features(const Expr& e, Features& f) {
        switch (e.k) {
            case Expr::K::Collate: f.rare[5] = true; break;
            case Expr::K::Cast: f.rare[6] = true; break;
            case Expr::K::Cmp:
                if (e.cmp == CmpOp::Like) f.rare[7] = true;
                break;
            case Expr::K::Not:
                if (e.a && e.a->k == Expr::K::Not) f.rare[8] = true;
                break;
            case Expr::K::Subquery:
                f.rare[4] = true;
                if (e.sub) scan_select_features(*e.sub, f);
                break;
            default: break;
        }
        if (e.a) scan_expr_features(*e.a, f);
        if (e.b) scan_expr_features(*e.b, f);
    }

    void scan_primary_features(const TablePrimary& tp, Features& f) {
        if (tp.derived) {
            f.rare[3] = true;
            if (tp.sub) scan_select_features(*tp.sub, f);
        }
    }

    void scan_select_features(const SelectStmt& s, Features& f) {
        if (s.distinct) f.distinct = true;
        {
            const auto& tr = s.from;
            scan_primary_features(tr.first, f);
            for (const auto& seg : tr.segs) {
                if (seg.kind == JoinKind::Natural) f.rare[0] = true;
                if (seg.kind == JoinKind::Outer) f.rare[1] = true;
                if (seg.spec == 2) f.rare[2] = true;
                if (seg.on) scan_expr_features(*seg.on, f);
                scan_primary_features(seg.right, f);
            }
        }
        for (const auto& [e, alias] : s.items) scan_expr_features(*e, f);
        if (s.where) scan_expr_features(*s.where, f);
        for (const auto& oi : s.order) {
            if (oi.dir == 2) f.rare[9] = true;
            scan_expr_features(*oi.e, f);
        }
    }

    // --- execution ----------------------------------------------------------

    struct RowSet {
        std::vector<std::string> col_tables;  // owning table name per column
        std::vector<std::string> col_names;
        std::vector<std::vector<Value>> rows;
    };

    struct EvalCtx {
        const RowSet* rs = nullptr;
        const std::vector<Value>* row = nullptr;
        int depth = 0;
    };

    Value eval(const Expr& e, EvalCtx& ctx) {
        switch (e.k) {
            case Expr::K::IntLit:
            case Expr::K::FloatLit:
            case Expr::K::StrLit: return e.lit;
            case Expr::K::Null: return Value::null();
            case Expr::K::Column: {
                if (!ctx.rs) throw ToySemanticError{P_SEM_UNKNOWN_COLUMN};
                int found = -1;
                for (size_t i = 0; i < ctx.rs->col_names.size(); ++i)
                    if (ctx.rs->col_names[i] == e.name) {
                        if (found >= 0) {
                            hit(P_SEM_AMBIGUOUS_COLUMN);  // first match wins
                            break;
                        }
                        found = static_cast<int>(i);
                    }
                if (found < 0) throw ToySemanticError{P_SEM_UNKNOWN_COLUMN};
                return (*ctx.row)[found];
            }
            case Expr::K::Qualified: {
                hit(P_EX_QUALIFIED);
                if (!ctx.rs) throw ToySemanticError{P_SEM_UNKNOWN_COLUMN};
                for (size_t i = 0; i < ctx.rs->col_names.size(); ++i)
                    if (ctx.rs->col_tables[i] == e.table && ctx.rs->col_names[i] == e.name)
                        return (*ctx.row)[i];
                throw ToySemanticError{P_SEM_UNKNOWN_COLUMN};
            }
            case Expr::K::Or: {
                Value a = eval(*e.a, ctx), b = eval(*e.b, ctx);
                return Value::of_int(truthy(a) || truthy(b) ? 1 : 0);
            }
            case Expr::K::And: {
                Value a = eval(*e.a, ctx), b = eval(*e.b, ctx);
                return Value::of_int(truthy(a) && truthy(b) ? 1 : 0);
            }
            case Expr::K::Not: {
                hit(P_EX_NOT);
                if (e.a->k == Expr::K::Not) hit(P_EX_NOT_NOT);
                return Value::of_int(truthy(eval(*e.a, ctx)) ? 0 : 1);
            }
            case Expr::K::Cmp: return eval_cmp(e, ctx);
            case Expr::K::Arith: return eval_arith(e, ctx);
            case Expr::K::Collate: {
                hit(e.nocase ? P_EX_COLLATE_NOCASE : P_EX_COLLATE_BINARY);
                Value v = eval(*e.a, ctx);
                if (e.nocase && v.t == Value::T::Text)
                    for (auto& c : v.s) c = char(std::tolower(static_cast<unsigned char>(c)));
                return v;
            }
            case Expr::K::Func: return eval_func(e, ctx);
            case Expr::K::Cast: return eval_cast(e, ctx);
            case Expr::K::Subquery: {
                hit(P_EX_SUBQUERY);
                if (ctx.depth + 1 >= kMaxSubqueryDepth)
                    throw ToySemanticError{P_SEM_SUBQUERY_DEPTH};
                RowSet sub = run_select(*e.sub, ctx.depth + 1);
                if (sub.rows.empty() || sub.rows[0].empty()) {
                    hit(P_SEL_EMPTY_SUB);
                    return Value::null();
                }
                return sub.rows[0][0];
            }
        }
        return Value::null();
    }

    static bool truthy(const Value& v) {
        if (v.is_null()) return false;
        if (v.t == Value::T::Int) return v.i != 0;
        if (v.t == Value::T::Float) return v.f != 0.0;
        return !v.s.empty();
    }

    Value eval_cmp(const Expr& e, EvalCtx& ctx) {
        static const uint32_t probes[] = {P_CMP_EQ, P_CMP_NE, P_CMP_LT, P_CMP_GT,
                                          P_CMP_LE, P_CMP_GE, P_EX_LIKE};
        hit(probes[static_cast<int>(e.cmp)]);
        Value a = eval(*e.a, ctx), b = eval(*e.b, ctx);
        if (a.is_null() || b.is_null()) {
            hit(P_EX_NULL_CMP);
            return Value::of_int(0);
        }
        if (e.cmp == CmpOp::Like) return Value::of_int(like_match(value_text(a), value_text(b)));
        int c = value_compare(a, b);
        bool r = false;
        switch (e.cmp) {
            case CmpOp::Eq: r = value_equal(a, b); break;
            case CmpOp::Ne: r = !value_equal(a, b); break;
            case CmpOp::Lt: r = c < 0; break;
            case CmpOp::Gt: r = c > 0; break;
            case CmpOp::Le: r = c <= 0; break;
            case CmpOp::Ge: r = c >= 0; break;
            case CmpOp::Like: break;
        }
        return Value::of_int(r ? 1 : 0);
    }

    static bool like_match(const std::string& text, const std::string& pattern) {
        // Naive %/_ matcher, bounded by input caps upstream.
        std::function<bool(size_t, size_t)> m = [&](size_t ti, size_t pi) -> bool {
            while (pi < pattern.size()) {
                char pc = pattern[pi];
                if (pc == '%') {
                    for (size_t skip = ti; skip <= text.size(); ++skip)
                        if (m(skip, pi + 1)) return true;
                    return false;
                }
                if (ti >= text.size()) return false;
                if (pc != '_' && pc != text[ti]) return false;
                ++ti;
                ++pi;
            }
            return ti == text.size();
        };
        return m(0, 0);
    }

    Value eval_arith(const Expr& e, EvalCtx& ctx) {
        static const uint32_t probes[] = {P_ARITH_ADD, P_ARITH_SUB, P_ARITH_MUL, P_ARITH_DIV};
        hit(probes[static_cast<int>(e.arith)]);
        Value a = eval(*e.a, ctx), b = eval(*e.b, ctx);
        if (a.is_null() || b.is_null()) return Value::null();
        // Text coerces through numeric parse; both-int stays int.
        double x = numeric_of(a), y = numeric_of(b);
        bool both_int = a.t == Value::T::Int && b.t == Value::T::Int;
        // Int arithmetic wraps; the planted bugs are the only faults here.
        auto wrap = [](uint64_t v) { return Value::of_int(static_cast<int64_t>(v)); };
        switch (e.arith) {
            case ArithOp::Add:
                return both_int ? wrap(uint64_t(a.i) + uint64_t(b.i)) : Value::of_float(x + y);
            case ArithOp::Sub:
                return both_int ? wrap(uint64_t(a.i) - uint64_t(b.i)) : Value::of_float(x - y);
            case ArithOp::Mul:
                return both_int ? wrap(uint64_t(a.i) * uint64_t(b.i)) : Value::of_float(x * y);
            case ArithOp::Div:
                if (y == 0.0) throw ToySemanticError{P_SEM_DIV_ZERO};
                if (both_int) {
                    hit(P_EX_INT_DIV);
                    if (b.i == -1) return wrap(uint64_t(0) - uint64_t(a.i));
                    return Value::of_int(a.i / b.i);
                }
                return Value::of_float(x / y);
        }
        return Value::null();
    }

    static double numeric_of(const Value& v) {
        if (v.t == Value::T::Text) return std::strtod(v.s.c_str(), nullptr);
        return v.as_double();
    }

    Value eval_func(const Expr& e, EvalCtx& ctx) {
        Value a = eval(*e.a, ctx);
        if (e.name == "ABS") {
            hit(P_EX_FUNC_ABS);
            if (a.is_null()) return a;
            if (a.t == Value::T::Text) {
                hit(P_EX_ABS_TEXT);
                return Value::of_float(std::fabs(numeric_of(a)));
            }
            return a.t == Value::T::Int ? Value::of_int(a.i < 0 ? -a.i : a.i)
                                        : Value::of_float(std::fabs(a.f));
        }
        if (e.name == "LENGTH") {
            hit(P_EX_FUNC_LENGTH);
            if (a.is_null()) return a;
            return Value::of_int(static_cast<int64_t>(value_text(a).size()));
        }
        bool upper = e.name == "UPPER";
        hit(upper ? P_EX_FUNC_UPPER : P_EX_FUNC_LOWER);
        if (a.is_null()) return a;
        std::string s = value_text(a);
        for (auto& c : s)
            c = char(upper ? std::toupper(static_cast<unsigned char>(c))
                           : std::tolower(static_cast<unsigned char>(c)));
        return Value::of_text(std::move(s));
    }

    Value eval_cast(const Expr& e, EvalCtx& ctx) {
        Value a = eval(*e.a, ctx);
        switch (e.cast_to) {
            case ColType::Int: {
                hit(P_EX_CAST_INT);
                if (a.is_null()) return a;
                if (a.t == Value::T::Text) {
                    char* end = nullptr;
                    int64_t v = std::strtoll(a.s.c_str(), &end, 10);
                    if (end == a.s.c_str()) hit(P_EX_CAST_BAD_TEXT);
                    return Value::of_int(v);
                }
                return Value::of_int(static_cast<int64_t>(a.as_double()));
            }
            case ColType::Float: {
                hit(P_EX_CAST_FLOAT);
                if (a.is_null()) return a;
                return Value::of_float(numeric_of(a));
            }
            case ColType::Text: {
                hit(P_EX_CAST_TEXT);
                if (a.is_null()) return a;
                return Value::of_text(value_text(a));
            }
        }
        return Value::null();
    }

    // --- SELECT pipeline ----------------------------------------------------

    RowSet primary_rows(const TablePrimary& tp, int depth) {
        RowSet rs;
        if (tp.derived) {
            hit(P_DERIVED_TABLE);
            if (depth + 1 >= kMaxSubqueryDepth) throw ToySemanticError{P_SEM_SUBQUERY_DEPTH};
            RowSet sub = run_select(*tp.sub, depth + 1);
            if (sub.rows.empty()) hit(P_DERIVED_EMPTY);
            rs.col_names = sub.col_names;
            rs.col_tables.assign(sub.col_names.size(), tp.name);  // alias qualifies
            rs.rows = std::move(sub.rows);
            return rs;
        }
        Table* t = find_table(tp.name);
        if (!t) throw ToySemanticError{P_SEM_UNKNOWN_TABLE};
        if (!tp.alias.empty()) hit(P_SEL_TABLE_ALIAS);
        for (const auto& c : t->cols) {
            // An alias hides the underlying table name from qualified refs.
            rs.col_tables.push_back(tp.alias.empty() ? t->name : tp.alias);
            rs.col_names.push_back(c.name);
        }
        rs.rows = t->rows;
        return rs;
    }

    RowSet join_rows(const RowSet& left, const RowSet& right, const JoinSeg& seg,
                     int depth) {
        static const uint32_t kind_probe[] = {P_JOIN_BARE, P_JOIN_INNER,  P_JOIN_LEFT,
                                              P_JOIN_RIGHT, P_JOIN_OUTER, P_JOIN_CROSS,
                                              P_JOIN_NATURAL};
        hit(kind_probe[static_cast<int>(seg.kind)]);
        if (seg.spec == 1) hit(P_JOIN_ON);
        if (seg.spec == 2) hit(P_JOIN_USING);
        if (seg.kind == JoinKind::Natural && seg.spec == 2)
            throw ToySemanticError{P_SEM_NATURAL_USING};

        RowSet out;
        out.col_tables = left.col_tables;
        out.col_names = left.col_names;
        out.col_tables.insert(out.col_tables.end(), right.col_tables.begin(),
                              right.col_tables.end());
        out.col_names.insert(out.col_names.end(), right.col_names.begin(),
                             right.col_names.end());

        // Column pairs that must be equal.
        std::vector<std::pair<size_t, size_t>> eq_pairs;
        if (seg.kind == JoinKind::Natural) {
            for (size_t i = 0; i < left.col_names.size(); ++i)
                for (size_t j = 0; j < right.col_names.size(); ++j)
                    if (left.col_names[i] == right.col_names[j]) eq_pairs.emplace_back(i, j);
            if (eq_pairs.empty()) hit(P_JOIN_NATURAL_NO_COMMON);
        }
        if (seg.spec == 2) {
            for (const auto& name : seg.using_cols) {
                size_t li = left.col_names.size(), rj = right.col_names.size();
                for (size_t i = 0; i < left.col_names.size(); ++i)
                    if (left.col_names[i] == name) {
                        li = i;
                        break;
                    }
                for (size_t j = 0; j < right.col_names.size(); ++j)
                    if (right.col_names[j] == name) {
                        rj = j;
                        break;
                    }
                if (li == left.col_names.size() || rj == right.col_names.size())
                    throw ToySemanticError{P_SEM_USING_MISSING};
                eq_pairs.emplace_back(li, rj);
            }
        }

        bool left_outer = seg.kind == JoinKind::Left || seg.kind == JoinKind::Outer;
        bool right_outer = seg.kind == JoinKind::Right || seg.kind == JoinKind::Outer;
        std::vector<bool> right_matched(right.rows.size(), false);

        for (const auto& lrow : left.rows) {
            bool matched = false;
            for (size_t rj = 0; rj < right.rows.size(); ++rj) {
                const auto& rrow = right.rows[rj];
                hit(P_SEL_ROWS_SCAN);
                bool ok = true;
                for (auto [li, ri] : eq_pairs)
                    if (!value_equal(lrow[li], rrow[ri])) {
                        ok = false;
                        break;
                    }
                if (ok && seg.spec == 1) {
                    std::vector<Value> combined = lrow;
                    combined.insert(combined.end(), rrow.begin(), rrow.end());
                    EvalCtx ctx{&out, &combined, depth};
                    ok = truthy(eval(*seg.on, ctx));
                }
                if (!ok) continue;
                matched = true;
                right_matched[rj] = true;
                std::vector<Value> combined = lrow;
                combined.insert(combined.end(), rrow.begin(), rrow.end());
                out.rows.push_back(std::move(combined));
                if (out.rows.size() > kMaxJoinRows) throw ToySemanticError{P_SEM_JOIN_CAP};
            }
            if (!matched && left_outer) {
                std::vector<Value> combined = lrow;
                combined.resize(out.col_names.size());
                out.rows.push_back(std::move(combined));
            }
        }
        if (right_outer) {
            for (size_t rj = 0; rj < right.rows.size(); ++rj) {
                if (right_matched[rj]) continue;
                std::vector<Value> combined(left.col_names.size());
                combined.insert(combined.end(), right.rows[rj].begin(), right.rows[rj].end());
                out.rows.push_back(std::move(combined));
                if (out.rows.size() > kMaxJoinRows) throw ToySemanticError{P_SEM_JOIN_CAP};
            }
        }
        return out;
    }

    void check_mixed_index_read(const TablePrimary& tp) {
        if (tp.derived) return;
        Table* t = find_table(tp.name);
        if (!t || !t->temporary) return;
        for (const auto& ix : t->indexes)
            if (ix.plain_parts > 0 && ix.expr_parts > 0)
                throw ToyBug{ToyDatabase::kBugMixedIndex, "ix_mixed", false};
    }

    RowSet table_ref_rows(const TableRef& tr, int depth) {
        RowSet rs = primary_rows(tr.first, depth);
        if (!tr.segs.empty()) hit(P_SEL_JOIN);
        if (tr.segs.size() >= 2) hit(P_SEL_MULTI_JOIN);
        for (const auto& seg : tr.segs) {
            RowSet right = primary_rows(seg.right, depth);
            rs = join_rows(rs, right, seg, depth);
        }
        return rs;
    }

    RowSet run_select(const SelectStmt& s, int depth) {
        if (s.distinct) hit(P_SEL_DISTINCT);
        if (s.where) hit(P_SEL_WHERE);
        if (!s.group.empty()) hit(P_SEL_GROUP);
        if (!s.order.empty()) hit(P_SEL_ORDER);
        if (s.has_limit) hit(P_SEL_LIMIT);
        // Planted corruption check: reading a table whose index was created
        // with mixed plain+expression parts on a TEMPORARY table.
        check_mixed_index_read(s.from.first);
        for (const auto& seg : s.from.segs) check_mixed_index_read(seg.right);

        RowSet src = table_ref_rows(s.from, depth);

        if (s.where) {
            std::vector<std::vector<Value>> kept;
            for (auto& row : src.rows) {
                EvalCtx ctx{&src, &row, depth};
                if (truthy(eval(*s.where, ctx))) kept.push_back(std::move(row));
            }
            src.rows = std::move(kept);
        }

        if (!s.group.empty()) {
            // Dedupe on the group columns, first row wins.
            std::vector<size_t> gcols;
            for (const auto& name : s.group) {
                size_t found = src.col_names.size();
                for (size_t i = 0; i < src.col_names.size(); ++i)
                    if (src.col_names[i] == name) {
                        found = i;
                        break;
                    }
                if (found == src.col_names.size()) throw ToySemanticError{P_SEM_GROUP_UNKNOWN};
                gcols.push_back(found);
            }
            std::vector<std::vector<Value>> kept;
            for (auto& row : src.rows) {
                bool dup = false;
                for (const auto& prev : kept) {
                    bool same = true;
                    for (size_t g : gcols)
                        if (!value_equal(prev[g], row[g])) {
                            same = false;
                            break;
                        }
                    if (same) {
                        dup = true;
                        break;
                    }
                }
                if (!dup) kept.push_back(std::move(row));
            }
            src.rows = std::move(kept);
        }

        if (!s.order.empty()) {
            for (const auto& oi : s.order) hit(oi.dir == 2 ? P_SEL_ORDER_DESC : P_SEL_ORDER_ASC);
            std::vector<size_t> perm(src.rows.size());
            for (size_t i = 0; i < perm.size(); ++i) perm[i] = i;
            std::vector<std::vector<Value>> keys(src.rows.size());
            for (size_t i = 0; i < src.rows.size(); ++i) {
                EvalCtx ctx{&src, &src.rows[i], depth};
                for (const auto& oi : s.order) keys[i].push_back(eval(*oi.e, ctx));
            }
            std::stable_sort(perm.begin(), perm.end(), [&](size_t a, size_t b) {
                for (size_t k = 0; k < s.order.size(); ++k) {
                    int c = value_compare(keys[a][k], keys[b][k]);
                    if (s.order[k].dir == 2) c = -c;
                    if (c != 0) return c < 0;
                }
                return false;
            });
            std::vector<std::vector<Value>> sorted;
            sorted.reserve(src.rows.size());
            for (size_t i : perm) sorted.push_back(std::move(src.rows[i]));
            src.rows = std::move(sorted);
        }

        // Projection.
        RowSet out;
        if (s.star) {
            hit(P_SEL_STAR);
            out = std::move(src);
        } else {
            for (size_t i = 0; i < s.items.size(); ++i) {
                hit(P_SEL_ITEMS);
                const auto& alias = s.items[i].second;
                if (!alias.empty()) hit(P_SEL_ALIAS);
                out.col_tables.push_back("");
                out.col_names.push_back(!alias.empty() ? alias : "c" + std::to_string(i));
            }
            for (auto& row : src.rows) {
                EvalCtx ctx{&src, &row, depth};
                std::vector<Value> projected;
                projected.reserve(s.items.size());
                for (const auto& [e, alias] : s.items) projected.push_back(eval(*e, ctx));
                out.rows.push_back(std::move(projected));
            }
        }

        if (s.distinct) {
            std::vector<std::vector<Value>> kept;
            for (auto& row : out.rows) {
                bool dup = false;
                for (const auto& prev : kept) {
                    bool same = prev.size() == row.size();
                    for (size_t i = 0; same && i < row.size(); ++i)
                        if (!value_equal(prev[i], row[i])) same = false;
                    if (same) {
                        dup = true;
                        break;
                    }
                }
                if (!dup) kept.push_back(std::move(row));
            }
            out.rows = std::move(kept);
        }

        if (s.has_limit) {
            if (s.limit < 0) throw ToySemanticError{P_SEM_NEGATIVE_LIMIT};
            if (out.rows.size() > static_cast<size_t>(s.limit))
                out.rows.resize(static_cast<size_t>(s.limit));
        }
        for (size_t i = 0; i < out.rows.size(); ++i) hit(P_SEL_ROWS_OUT);
        return out;
    }

    // --- statement execution -------------------------------------------------

    Value coerce_for_column(const Value& v, const ColumnDef& col, bool from_insert) {
        if (v.is_null()) return v;
        switch (col.type) {
            case ColType::Int:
                if (v.t == Value::T::Float) {
                    hit(P_UPD_COERCE_FI);
                    return Value::of_int(static_cast<int64_t>(v.f));
                }
                if (v.t == Value::T::Text) {
                    hit(P_UPD_COERCE_TEXT);
                    return Value::of_int(std::strtoll(v.s.c_str(), nullptr, 10));
                }
                return v;
            case ColType::Float:
                if (v.t == Value::T::Int) {
                    // Planted assertion: INT32_MIN arriving in a FLOAT column
                    // from an INSERT trips a fabricated range check.
                    if (from_insert && v.i == INT64_C(-2147483648))
                        throw ToyBug{ToyDatabase::kBugIntMinFloat, "intmin_float", true};
                    hit(P_UPD_COERCE_IF);
                    return Value::of_float(double(v.i));
                }
                if (v.t == Value::T::Text) {
                    hit(P_UPD_COERCE_TEXT);
                    return Value::of_float(std::strtod(v.s.c_str(), nullptr));
                }
                return v;
            case ColType::Text:
                if (v.t != Value::T::Text) {
                    hit(P_UPD_COERCE_TEXT);
                    return Value::of_text(value_text(v));
                }
                return v;
        }
        return v;
    }

    void exec_create_table(const CreateTable& ct) {
        hit(P_STMT_CREATE_TABLE);
        if (ct.temporary) hit(P_CT_TEMPORARY);
        if (ct.if_not_exists) hit(P_CT_IF_NOT_EXISTS);
        if (!ct.indexes.empty()) hit(P_CT_HAS_INDEX);

        if (find_table(ct.name)) {
            if (ct.if_not_exists) {
                hit(P_CT_IFNE_DUP);
                return;
            }
            throw ToySemanticError{P_SEM_DUP_TABLE};
        }
        if (tables.size() >= kMaxTables) throw ToySemanticError{P_SEM_TABLE_CAP};
        if (ct.cols.empty()) throw ToySemanticError{P_SEM_NO_COLUMNS};
        if (ct.cols.size() > kMaxColumns) throw ToySemanticError{P_SEM_TOO_MANY_COLUMNS};
        for (size_t i = 0; i < ct.cols.size(); ++i) {
            hit(P_CT_COLS);
            switch (ct.cols[i].type) {
                case ColType::Int: hit(P_CT_COL_INT); break;
                case ColType::Float: hit(P_CT_COL_FLOAT); break;
                case ColType::Text: hit(P_CT_COL_TEXT); break;
            }
            switch (ct.cols[i].constraint) {
                case ColumnDef::C::NotNull: hit(P_CT_NOT_NULL); break;
                case ColumnDef::C::Unique: hit(P_CT_UNIQUE_COL); break;
                case ColumnDef::C::Default: hit(P_CT_DEFAULT); break;
                case ColumnDef::C::None: break;
            }
            for (size_t j = i + 1; j < ct.cols.size(); ++j)
                if (ct.cols[i].name == ct.cols[j].name) throw ToySemanticError{P_SEM_DUP_COLUMN};
        }

        Table t;
        t.name = ct.name;
        t.temporary = ct.temporary;
        t.cols = ct.cols;
        for (const auto& ix : ct.indexes) {
            IndexInfo info;
            info.name = ix.name;
            for (const auto& kp : ix.parts) {
                if (kp.is_expr) {
                    hit(P_CT_EXPR_PART);
                    ++info.expr_parts;
                } else {
                    bool known = false;
                    for (const auto& c : ct.cols)
                        if (c.name == kp.column) known = true;
                    if (!known) throw ToySemanticError{P_SEM_UNKNOWN_COLUMN};
                    ++info.plain_parts;
                }
            }
            if (info.plain_parts > 0 && info.expr_parts > 0) {
                hit(P_CT_MIXED_PARTS);
                // Planted bug shape: the mixed index on a TEMPORARY table is
                // recorded corrupted; the crash fires when the table is read.
            }
            for (const auto& other : t.indexes)
                if (other.name == info.name) throw ToySemanticError{P_SEM_DUP_INDEX};
            t.indexes.push_back(std::move(info));
        }
        tables.push_back(std::move(t));
    }

    void exec_create_index(const CreateIndex& ci) {
        hit(P_STMT_CREATE_INDEX);
        if (ci.unique) hit(P_CI_UNIQUE);
        Table* t = find_table(ci.table);
        if (!t) throw ToySemanticError{P_SEM_UNKNOWN_TABLE};
        for (const auto& existing : t->indexes)
            if (existing.name == ci.name) throw ToySemanticError{P_SEM_DUP_INDEX};
        IndexInfo info;
        info.name = ci.name;
        info.unique = ci.unique;
        for (const auto& kp : ci.parts) {
            hit(P_CI_PARTS);
            if (kp.is_expr) {
                hit(P_CI_EXPR_PART);
                ++info.expr_parts;
            } else {
                bool known = false;
                for (const auto& c : t->cols)
                    if (c.name == kp.column) known = true;
                if (!known) throw ToySemanticError{P_SEM_UNKNOWN_COLUMN};
                ++info.plain_parts;
            }
        }
        if (info.plain_parts > 0 && info.expr_parts > 0) hit(P_CI_MIXED_PARTS);
        t->indexes.push_back(std::move(info));
    }

    void exec_insert(const Insert& ins) {
        hit(P_STMT_INSERT);
        Table* t = find_table(ins.table);
        if (!t) throw ToySemanticError{P_SEM_UNKNOWN_TABLE};

        std::vector<size_t> target_cols;
        if (!ins.columns.empty()) {
            hit(P_INS_COL_LIST);
            for (const auto& name : ins.columns) {
                size_t found = t->cols.size();
                for (size_t i = 0; i < t->cols.size(); ++i)
                    if (t->cols[i].name == name) {
                        found = i;
                        break;
                    }
                if (found == t->cols.size()) throw ToySemanticError{P_SEM_UNKNOWN_COLUMN};
                target_cols.push_back(found);
            }
        } else {
            for (size_t i = 0; i < t->cols.size(); ++i) target_cols.push_back(i);
        }

        for (const auto& row : ins.rows) {
            hit(P_INS_ROWS);
            if (row.size() > target_cols.size()) throw ToySemanticError{P_SEM_ARITY};
            if (t->rows.size() >= kMaxRows) throw ToySemanticError{P_SEM_ROW_CAP};
            if (row.size() < target_cols.size()) hit(P_INS_PADDED);
            std::vector<Value> stored(t->cols.size());  // missing columns NULL
            for (size_t i = 0; i < t->cols.size(); ++i) {
                const auto& col = t->cols[i];
                if (col.constraint == ColumnDef::C::Default) stored[i] = col.def;
            }
            for (size_t i = 0; i < row.size(); ++i) {
                const Value& v = row[i];
                switch (v.t) {
                    case Value::T::Null: hit(P_INS_NULL); break;
                    case Value::T::Int:
                        if (v.i < 0) hit(P_INS_NEG_INT);
                        if (v.i == 2147483647 || v.i == INT64_C(-2147483648))
                            hit(P_INS_BOUNDARY_INT);
                        break;
                    case Value::T::Float: hit(P_INS_FLOAT); break;
                    case Value::T::Text: hit(P_INS_STRING); break;
                }
                stored[target_cols[i]] = coerce_for_column(v, t->cols[target_cols[i]], true);
            }
            t->rows.push_back(std::move(stored));
        }
    }

    RowSet exec_select(const SelectStmt& s) {
        hit(P_STMT_SELECT);
        Features f;
        scan_select_features(s, f);
        fire_combos(f);
        // Planted bug: the join/order/expression pile-up nobody handles.
        if (f.rare[1] && f.rare[2] && f.rare[5] && f.rare[6] && f.rare[9])
            throw ToyBug{ToyDatabase::kBugJoinCombo, "join_combo", false};
        return run_select(s, 0);
    }

    void exec_update(const Update& u) {
        hit(P_STMT_UPDATE);
        Table* t = find_table(u.table);
        if (!t) throw ToySemanticError{P_SEM_UNKNOWN_TABLE};
        if (u.where) hit(P_UPD_WHERE);

        RowSet rs;
        for (const auto& c : t->cols) {
            rs.col_tables.push_back(t->name);
            rs.col_names.push_back(c.name);
        }
        std::vector<size_t> targets;
        for (const auto& [name, e] : u.assigns) {
            hit(P_UPD_ASSIGNS);
            size_t found = t->cols.size();
            for (size_t i = 0; i < t->cols.size(); ++i)
                if (t->cols[i].name == name) {
                    found = i;
                    break;
                }
            if (found == t->cols.size()) throw ToySemanticError{P_SEM_UNKNOWN_COLUMN};
            targets.push_back(found);
        }
        for (auto& row : t->rows) {
            EvalCtx ctx{&rs, &row, 0};
            if (u.where && !truthy(eval(*u.where, ctx))) continue;
            hit(P_UPD_ROWS);
            for (size_t a = 0; a < u.assigns.size(); ++a) {
                Value v = eval(*u.assigns[a].second, ctx);
                row[targets[a]] = coerce_for_column(v, t->cols[targets[a]], false);
            }
        }
    }

    void exec_delete(const Delete& d) {
        hit(P_STMT_DELETE);
        Table* t = find_table(d.table);
        if (!t) throw ToySemanticError{P_SEM_UNKNOWN_TABLE};
        if (d.where) hit(P_DEL_WHERE);
        RowSet rs;
        for (const auto& c : t->cols) {
            rs.col_tables.push_back(t->name);
            rs.col_names.push_back(c.name);
        }
        std::vector<std::vector<Value>> kept;
        for (auto& row : t->rows) {
            EvalCtx ctx{&rs, &row, 0};
            if (d.where && !truthy(eval(*d.where, ctx))) {
                kept.push_back(std::move(row));
            } else {
                hit(P_DEL_ROWS);
            }
        }
        t->rows = std::move(kept);
    }

    void exec_drop_table(const DropTable& d) {
        hit(P_STMT_DROP_TABLE);
        if (d.if_exists) hit(P_DROP_IF_EXISTS);
        for (size_t i = 0; i < tables.size(); ++i)
            if (tables[i].name == d.name) {
                if (tables[i].temporary) hit(P_DROP_TEMP_TABLE);
                tables.erase(tables.begin() + i);
                return;
            }
        if (!d.if_exists) throw ToySemanticError{P_SEM_UNKNOWN_TABLE};
    }

    void exec_drop_index(const DropIndex& d) {
        hit(P_STMT_DROP_INDEX);
        for (auto& t : tables)
            for (size_t i = 0; i < t.indexes.size(); ++i)
                if (t.indexes[i].name == d.name) {
                    hit(P_DROP_INDEX_OK);
                    t.indexes.erase(t.indexes.begin() + i);
                    return;
                }
        throw ToySemanticError{P_SEM_UNKNOWN_INDEX};
    }
};

ToyDatabase::ToyDatabase() : impl_(std::make_unique<Impl>()) {}
ToyDatabase::~ToyDatabase() = default;
ToyDatabase::ToyDatabase(ToyDatabase&&) noexcept = default;
ToyDatabase& ToyDatabase::operator=(ToyDatabase&&) noexcept = default;

void ToyDatabase::reset() { impl_->tables.clear(); }
size_t ToyDatabase::table_count() const { return impl_->tables.size(); }

ToyOutcome ToyDatabase::execute(const std::string& statement, ProbeSink& probes) {
    impl_->sink = &probes;
    ToyOutcome out;
    try {
        std::vector<Tok> toks = lex(statement);
        Parser parser{toks};
        Statement st = parser.statement();
        switch (st.k) {
            case Statement::K::CreateTable: impl_->exec_create_table(st.create_table); break;
            case Statement::K::CreateIndex: impl_->exec_create_index(st.create_index); break;
            case Statement::K::Insert: impl_->exec_insert(st.insert); break;
            case Statement::K::Select: impl_->exec_select(*st.select); break;
            case Statement::K::Update: impl_->exec_update(st.update); break;
            case Statement::K::Delete: impl_->exec_delete(st.del); break;
            case Statement::K::DropTable: impl_->exec_drop_table(st.drop_table); break;
            case Statement::K::DropIndex: impl_->exec_drop_index(st.drop_index); break;
        }
        out.status = ExecStatus::Ok;
    } catch (const ToySyntaxError&) {
        probes.hit(P_SYNTAX_ERROR);
        out.status = ExecStatus::SyntaxError;
    } catch (const ToySemanticError& e) {
        probes.hit(e.probe);
        out.status = ExecStatus::SemanticError;
    } catch (const ToyBug& bug) {
        probes.hit(bug.probe);
        out.crashed = !bug.is_assert;
        out.assert_failed = bug.is_assert;
        out.bug_probe = bug.probe;
        out.bug_name = bug.name;
    }
    impl_->sink = nullptr;
    return out;
}

}  // namespace gtf
