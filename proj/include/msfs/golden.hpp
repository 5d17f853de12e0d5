#pragma once

#include <string>
#include <vector>

namespace msfs::golden {

struct Entry {
    std::string name;
    std::string expected;
    std::string actual;
    bool pass = false;
};

struct TableResult {
    std::string table;
    std::vector<Entry> entries;
    bool all_pass() const;
    int passed() const;
};

// Shipped tables: diamond-states, line-states, l1-states, periods-th07,
// macro-th09-diamond, macro-th03-line.
const std::vector<std::string>& table_names();

// Runs the named oracle against the engine. Throws ConfigError for an
// unknown name.
TableResult run_table(const std::string& name);

} // namespace msfs::golden
