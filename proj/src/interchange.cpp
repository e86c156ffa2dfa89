#include "syncgame/interchange.hpp"

#include <set>
#include <sstream>

#include <json.hpp>

namespace syncgame {

using nlohmann::json;

namespace {

using Kind = ParseError::Kind;

std::string escape_pointer(const std::string& token)
{
    std::string out;
    for (char c : token) {
        if (c == '~')
            out += "~0";
        else if (c == '/')
            out += "~1";
        else
            out += c;
    }
    return out;
}

const json& require(const json& doc, const char* field)
{
    auto it = doc.find(field);
    if (it == doc.end())
        throw ParseError(Kind::schema, "/", std::string("missing field \"") + field + "\"");
    return *it;
}

// Validates the row-object shape shared by delta and gamma and returns the
// row for letter `name`.
const json& row_of(const json& table, const char* field, const std::string& name, unsigned n)
{
    std::string where = std::string("/") + field + "/" + escape_pointer(name);
    auto it = table.find(name);
    if (it == table.end())
        throw ParseError(Kind::arity, std::string("/") + field, "no row for letter \"" + name + "\"");
    if (!it->is_array())
        throw ParseError(Kind::schema, where, "row must be an array");
    if (it->size() != n)
        throw ParseError(Kind::arity, where,
                         "row has " + std::to_string(it->size()) + " entries, expected " + std::to_string(n));
    return *it;
}

void check_letters_known(const json& table, const char* field, const std::set<std::string>& names)
{
    if (!table.is_object())
        throw ParseError(Kind::schema, std::string("/") + field, "must be an object keyed by letter");
    for (const auto& [key, value] : table.items())
        if (!names.count(key))
            throw ParseError(Kind::arity, std::string("/") + field + "/" + escape_pointer(key),
                             "letter not in the alphabet");
}

Cost parse_cost(const json& v, const std::string& where)
{
    if (v.is_number_unsigned()) {
        auto c = v.get<std::uint64_t>();
        if (c == 0)
            throw ParseError(Kind::bad_cost, where, "cost must be a positive integer");
        if (c > kMaxCost)
            throw ParseError(Kind::bad_cost, where, "cost exceeds 2^63-1");
        return c;
    }
    if (v.is_number_integer())
        throw ParseError(Kind::bad_cost, where, "cost must be a positive integer");
    if (v.is_number())
        throw ParseError(Kind::bad_cost, where, "cost must be an integer");
    throw ParseError(Kind::schema, where, "cost must be a number");
}

} // namespace

Document parse_document(std::string_view text)
{
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ParseError(Kind::syntax, "byte " + std::to_string(e.byte), e.what());
    }
    if (!doc.is_object())
        throw ParseError(Kind::schema, "/", "document must be a JSON object");

    const json& jn = require(doc, "n");
    if (!jn.is_number_integer() || jn.get<std::int64_t>() < 1)
        throw ParseError(Kind::schema, "/n", "n must be a positive integer");
    if (jn.get<std::int64_t>() > std::numeric_limits<State>::max() / 2)
        throw ParseError(Kind::schema, "/n", "n is too large");
    auto n = static_cast<unsigned>(jn.get<std::int64_t>());

    const json& jalpha = require(doc, "alphabet");
    if (!jalpha.is_array() || jalpha.empty())
        throw ParseError(Kind::schema, "/alphabet", "alphabet must be a non-empty array of strings");
    std::vector<std::string> alphabet;
    std::set<std::string> names;
    for (std::size_t i = 0; i < jalpha.size(); ++i) {
        std::string where = "/alphabet/" + std::to_string(i);
        if (!jalpha[i].is_string() || jalpha[i].get<std::string>().empty())
            throw ParseError(Kind::schema, where, "letter names must be non-empty strings");
        alphabet.push_back(jalpha[i].get<std::string>());
        if (!names.insert(alphabet.back()).second)
            throw ParseError(Kind::degenerate, where, "duplicate letter name \"" + alphabet.back() + "\"");
    }
    const auto k = static_cast<unsigned>(alphabet.size());

    const json& jdelta = require(doc, "delta");
    check_letters_known(jdelta, "delta", names);
    std::vector<State> table(static_cast<std::size_t>(n) * k);
    bool partial = false;
    for (unsigned a = 0; a < k; ++a) {
        const json& row = row_of(jdelta, "delta", alphabet[a], n);
        for (unsigned q = 0; q < n; ++q) {
            const json& t = row[q];
            std::string where = "/delta/" + escape_pointer(alphabet[a]) + "/" + std::to_string(q);
            if (t.is_null()) {
                table[static_cast<std::size_t>(q) * k + a] = kUndefined;
                partial = true;
                continue;
            }
            if (!t.is_number_integer())
                throw ParseError(Kind::schema, where, "transition target must be an integer or null");
            auto target = t.get<std::int64_t>();
            if (target < 0 || target >= static_cast<std::int64_t>(n))
                throw ParseError(Kind::state_range, where,
                                 "target " + std::to_string(target) + " is not a state of 0.." + std::to_string(n - 1));
            table[static_cast<std::size_t>(q) * k + a] = static_cast<State>(target);
        }
    }

    Document out{Dfa(1, 1, {0}), std::nullopt};

    if (auto jgamma = doc.find("gamma"); jgamma != doc.end()) {
        if (partial)
            throw ParseError(Kind::schema, "/gamma", "a weighted automaton cannot have undefined transitions");
        check_letters_known(*jgamma, "gamma", names);
        std::vector<Cost> costs(table.size());
        for (unsigned a = 0; a < k; ++a) {
            const json& row = row_of(*jgamma, "gamma", alphabet[a], n);
            for (unsigned q = 0; q < n; ++q)
                costs[static_cast<std::size_t>(q) * k + a] =
                    parse_cost(row[q], "/gamma/" + escape_pointer(alphabet[a]) + "/" + std::to_string(q));
        }
        out.automaton = Dwa(Dfa(n, alphabet, std::move(table)), std::move(costs));
    } else if (partial) {
        out.automaton = Pfa(n, std::move(alphabet), std::move(table));
    } else {
        out.automaton = Dfa(n, std::move(alphabet), std::move(table));
    }

    if (auto jb = doc.find("budget"); jb != doc.end())
        out.budget = parse_cost(*jb, "/budget");
    return out;
}

AnyAutomaton parse_automaton(std::string_view text)
{
    return parse_document(text).automaton;
}

namespace {

template <typename Cell>
void write_rows(std::ostream& os, const char* field, const std::vector<std::string>& alphabet, unsigned n,
                std::span<const Cell> cells, bool last)
{
    const auto k = alphabet.size();
    os << "  \"" << field << "\": {\n";
    for (std::size_t a = 0; a < k; ++a) {
        os << "    " << json(alphabet[a]).dump() << ": [";
        for (unsigned q = 0; q < n; ++q) {
            if (q > 0)
                os << ", ";
            Cell c = cells[q * k + a];
            if constexpr (std::is_same_v<Cell, State>) {
                if (c == kUndefined) {
                    os << "null";
                    continue;
                }
            }
            os << c;
        }
        os << ']' << (a + 1 < k ? ",\n" : "\n");
    }
    os << "  }" << (last ? "\n" : ",\n");
}

} // namespace

std::string serialize_automaton(const AnyAutomaton& automaton, std::optional<Cost> budget)
{
    std::ostringstream os;
    auto header = [&](unsigned n, const std::vector<std::string>& alphabet) {
        os << "{\n  \"n\": " << n << ",\n  \"alphabet\": [";
        for (std::size_t a = 0; a < alphabet.size(); ++a)
            os << (a > 0 ? ", " : "") << json(alphabet[a]).dump();
        os << "],\n";
    };

    if (const auto* dwa = std::get_if<Dwa>(&automaton)) {
        header(dwa->states(), dwa->dfa().alphabet());
        write_rows<State>(os, "delta", dwa->dfa().alphabet(), dwa->states(), dwa->dfa().table(), false);
        write_rows<Cost>(os, "gamma", dwa->dfa().alphabet(), dwa->states(), dwa->costs(), !budget);
    } else {
        std::visit(
            [&](const auto& x) {
                if constexpr (!std::is_same_v<std::decay_t<decltype(x)>, Dwa>) {
                    header(x.states(), x.alphabet());
                    write_rows<State>(os, "delta", x.alphabet(), x.states(), x.table(), !budget);
                }
            },
            automaton);
    }
    if (budget)
        os << "  \"budget\": " << *budget << "\n";
    os << "}\n";
    return os.str();
}

const char* kind_name(const AnyAutomaton& automaton) noexcept
{
    switch (automaton.index()) {
    case 0: return "dfa";
    case 1: return "pfa";
    default: return "dwa";
    }
}

} // namespace syncgame
