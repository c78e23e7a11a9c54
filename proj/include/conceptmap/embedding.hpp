#pragma once

#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace conceptmap {

using WordVector = std::vector<double>;

// Vocabulary mapped to fixed-dimension real vectors. Rows are stored in file
// order in one flat array; vectors are held as 64-bit reals regardless of the
// precision carried by the source file, so long summations stay accurate.
// Immutable after parsing and safe for concurrent read-only use.
class EmbeddingTable {
public:
    explicit EmbeddingTable(std::size_t dim);

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return tokens_.size(); }
    bool empty() const { return tokens_.empty(); }

    // Count promised by the source file header (may differ from size() when
    // parsing was filtered).
    std::uint64_t declared_count() const { return declared_count_; }
    void set_declared_count(std::uint64_t n) { declared_count_ = n; }

    bool contains(const std::string& token) const { return index_.count(token) != 0; }

    // Throws DataError for unknown tokens.
    std::span<const double> vector(const std::string& token) const;
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * dim_, dim_}; }

    const std::vector<std::string>& tokens() const { return tokens_; }
    const double* data() const { return data_.data(); }

    // Rejects duplicate tokens, empty tokens, wrong lengths and non-finite
    // components.
    void insert(const std::string& token, std::span<const double> v);
    void insert(const std::string& token, std::initializer_list<double> v) {
        insert(token, std::span<const double>(v.begin(), v.size()));
    }

private:
    std::size_t dim_;
    std::uint64_t declared_count_ = 0;
    std::vector<std::string> tokens_;
    std::vector<double> data_;
    std::unordered_map<std::string, std::size_t> index_;
};

// Parses the fastText text format: header line "count dim", then one
// "token v1 ... v_dim" line per word, single-space separated. The token runs
// up to the first space. LF and CRLF both accepted. When vocab_filter is
// given, only matching tokens are stored (the stream is still structurally
// validated line by line, so huge files can be skimmed cheaply).
EmbeddingTable parse_embeddings(std::istream& in,
                                const std::unordered_set<std::string>* vocab_filter = nullptr);
EmbeddingTable load_embeddings(const std::string& path,
                               const std::unordered_set<std::string>* vocab_filter = nullptr);

// Writes the same format with round-trip-exact doubles.
void write_embeddings(const EmbeddingTable& table, std::ostream& out);

// dot(u,v) / (|u||v|). Throws DataError on length mismatch or zero norm.
double cosine(std::span<const double> u, std::span<const double> v);

// Componentwise sum. Throws DataError on empty input or ragged lengths.
WordVector sum_vectors(const std::vector<WordVector>& vs);

// Token of the table row with the highest cosine to q, ties broken by
// lexicographically smallest token. `exclude` removes candidates.
std::string nearest_label(std::span<const double> q, const EmbeddingTable& table,
                          const std::unordered_set<std::string>& exclude = {});

} // namespace conceptmap
