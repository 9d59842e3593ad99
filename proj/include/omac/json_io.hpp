#pragma once

#include "omac/achievability.hpp"
#include "omac/channel.hpp"
#include "omac/classifier.hpp"
#include "omac/codebook.hpp"
#include "omac/confusability.hpp"
#include "omac/converse.hpp"
#include "omac/good_cones.hpp"

#include "json.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace omac {

// Insertion-ordered so that identical inputs give byte-identical documents.
using Json = nlohmann::ordered_json;

// Schema or semantic problem in an input document.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Floats render with 17 significant digits (%.17g); NaN and infinities become null.
std::string dump_json(const Json& j, bool pretty = false);
Json parse_json(std::string_view text);  // throws InputError

// {"axes":[{"name":..,"symbols":[..]}],"values":[..]}, row-major over the listed axes.
Json to_json(const Tensor& t);
Tensor tensor_from_json(const Json& j);
Dist dist_from_json(const Json& j);

Json to_json(const ChannelSpec& spec);
std::string serialize_channel(const ChannelSpec& spec);
// Structural problems (bad JSON, missing field, unknown symbol, duplicate symbol)
// throw InputError. Semantic ones come back in the report.
struct ChannelParse {
    std::optional<ChannelSpec> spec;
    std::vector<std::string> report;
};
ChannelParse parse_channel_report(std::string_view text);
// Throws InputError unless the report is empty.
ChannelSpec parse_channel(std::string_view text);

// Codebook file: one JSON header line {"n","alphabet","type","separator"} then one
// codeword per line. type is the shared composition (counts) or null.
struct CodebookFile {
    Alphabet alphabet;
    std::size_t n = 0;
    std::vector<Word> words;
    std::optional<std::vector<std::int64_t>> type;
};
std::string write_codebook(const std::vector<Word>& words, const Alphabet& alphabet, std::size_t n);
CodebookFile read_codebook(std::string_view text);

Json to_json(const ConfusabilityCertificate& c);
Json to_json(const ZeroErrorReport& r, const ChannelSpec& spec);
Json to_json(const GoodDecomposition& d);
GoodDecomposition decomposition_from_json(const Json& j);
Json to_json(const CogoodCertificate& c);
Json to_json(const GoodSearchResult& r);
Json to_json(const ShapeVerdict& v);
// Enough of the verdict to replay it: case, eta, inputs and stored candidates.
ShapeVerdict verdict_from_json(const Json& j);
Json to_json(const InputScan& s);
Json to_json(const KlMinimum& m);
Json to_json(const InnerBoundReport& r);
Json to_json(const AchieveReport& r);
Json to_json(const EquicoupledReport& r);
Json to_json(const PlotkinBound& b);
Json to_json(const BruteForceResult& r, const ChannelSpec& spec);

std::string to_string(GoodPredicate p);
GoodPredicate good_predicate_from_string(const std::string& s);

}  // namespace omac
