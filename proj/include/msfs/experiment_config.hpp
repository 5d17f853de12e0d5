#pragma once

#include "msfs/sweep.hpp"

#include <map>
#include <string>

namespace msfs {

// Flat dotted-key experiment configuration ("section.key = value"). A
// `[section]` header prefixes the bare keys that follow it. Unknown keys
// are rejected; missing keys take documented defaults; the resolved config
// is echoed back in outputs for provenance.
class ExperimentConfig {
  public:
    static ExperimentConfig load_file(const std::string& path);
    static ExperimentConfig from_string(const std::string& text);

    // `--set key=value` override; validated like file entries.
    void set(const std::string& key, const std::string& value);
    void set_pair(const std::string& key_eq_value);

    bool has(const std::string& key) const { return values_.count(key) > 0; }
    std::string get_or(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;

    // Sweep/run description; full semantic validation happens here.
    SweepSpec sweep_spec() const;

    // Single-run accessors (fall back to the first range value).
    double single_f() const;
    double single_tau() const;
    void single_fq(int& fq0, int& fq1, int& fq2) const;

    // Resolved "key = value" lines, defaults included, sorted by key.
    std::string echo() const;

  private:
    std::map<std::string, std::string> values_;
};

// "lo:hi:step" (inclusive), "lo:hi" (step 1), "a,b,c", or a single value.
std::vector<double> parse_range(const std::string& text, const std::string& key);
std::vector<int> parse_int_range(const std::string& text, const std::string& key);

} // namespace msfs
