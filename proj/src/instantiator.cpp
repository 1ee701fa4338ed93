#include "gtf/instantiator.hpp"

#include <cstdio>

#include "gtf/generator.hpp"

namespace gtf {

void SchemaRegistry::add_column(const std::string& table, const std::string& column) {
    for (auto& t : tables_)
        if (t.name == table) {
            t.columns.push_back(column);
            return;
        }
}

const SchemaRegistry::Table* SchemaRegistry::find_table(const std::string& name) const {
    for (const auto& t : tables_)
        if (t.name == name) return &t;
    return nullptr;
}

std::vector<std::string> SchemaRegistry::all_columns() const {
    std::vector<std::string> out;
    for (const auto& t : tables_)
        for (const auto& c : t.columns) out.push_back(c);
    return out;
}

namespace {

std::string random_string_literal(Rng& rng, const InstantiateOptions& opt) {
    static const char alphabet[] = "abcdefghijklmnopqrstuvwxyz0123456789";
    size_t len = rng.below(opt.max_string_len + 1);
    std::string content;
    for (size_t i = 0; i < len; ++i)
        content.push_back(alphabet[rng.below(sizeof(alphabet) - 1)]);
    if (rng.chance(opt.string_quote_chance) && !content.empty()) {
        // Drop a quote into the middle; emission doubles it.
        content[rng.below(content.size())] = '\'';
    }
    std::string out = "'";
    for (char c : content) {
        out.push_back(c);
        if (c == '\'') out.push_back('\'');
    }
    out.push_back('\'');
    return out;
}

std::string format_float(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

}  // namespace

std::string instantiate(const Grammar& grammar, const DerivationTree& tree,
                        SchemaRegistry& registry, Rng& rng, const InstantiateOptions& opt) {
    // Statement-local scope: column draws prefer the most recent table slot
    // filled in this statement.
    std::string scope_table;

    std::string out;
    auto emit = [&](const std::string& text) {
        if (!out.empty()) out.push_back(' ');
        out += text;
    };

    walk_leaves(grammar, *tree.root, [&](const Symbol& sym) {
        if (sym.kind != SymbolKind::Placeholder) {
            emit(sym.surface);
            return;
        }
        switch (sym.category) {
            case PlaceholderCategory::NewTable: {
                std::string name = registry.mint_table();
                registry.add_table(name);
                scope_table = name;
                emit(name);
                break;
            }
            case PlaceholderCategory::ExistingTable: {
                if (registry.tables().empty()) {
                    emit(registry.mint_table());  // unregistered fallback
                } else {
                    const auto& t = registry.tables()[rng.below(registry.tables().size())];
                    scope_table = t.name;
                    emit(t.name);
                }
                break;
            }
            case PlaceholderCategory::NewColumn: {
                std::string name = registry.mint_column();
                if (!scope_table.empty()) registry.add_column(scope_table, name);
                emit(name);
                break;
            }
            case PlaceholderCategory::ExistingColumn: {
                const SchemaRegistry::Table* scoped =
                    scope_table.empty() ? nullptr : registry.find_table(scope_table);
                if (scoped && !scoped->columns.empty()) {
                    emit(scoped->columns[rng.below(scoped->columns.size())]);
                } else if (auto all = registry.all_columns(); !all.empty()) {
                    emit(all[rng.below(all.size())]);
                } else {
                    emit(registry.mint_column());
                }
                break;
            }
            case PlaceholderCategory::NewIndex: {
                std::string name = registry.mint_index();
                registry.add_index(name);
                emit(name);
                break;
            }
            case PlaceholderCategory::ExistingIndex: {
                if (registry.indexes().empty())
                    emit(registry.mint_index());
                else
                    emit(registry.indexes()[rng.below(registry.indexes().size())]);
                break;
            }
            case PlaceholderCategory::IntConst: {
                // Half boundary values, half small randoms.
                if (rng.chance(0.5)) {
                    emit(std::to_string(opt.int_boundaries[rng.below(opt.int_boundaries.size())]));
                } else {
                    int64_t span = 2 * opt.small_int_range + 1;
                    emit(std::to_string(int64_t(rng.below(span)) - opt.small_int_range));
                }
                break;
            }
            case PlaceholderCategory::FloatConst: {
                int64_t hundredths = int64_t(rng.below(200001)) - 100000;
                emit(format_float(double(hundredths) / 100.0));
                break;
            }
            case PlaceholderCategory::StringConst:
                emit(random_string_literal(rng, opt));
                break;
            case PlaceholderCategory::Identifier:
                emit("id" + std::to_string(rng.below(100)));
                break;
        }
    });
    return out;
}

}  // namespace gtf
