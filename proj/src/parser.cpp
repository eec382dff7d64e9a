#include "varmech/parser.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include <nlohmann/json.hpp>

namespace varmech {

namespace {

enum class Tok { number, ident, prime, plus, minus, star, slash, caret, lparen, rparen, comma, end };

struct Token {
    Tok kind;
    std::size_t pos;
    std::string text;
};

const char* describe(Tok t)
{
    switch (t) {
    case Tok::number: return "number";
    case Tok::ident: return "identifier";
    case Tok::prime: return "'";
    case Tok::plus: return "+";
    case Tok::minus: return "-";
    case Tok::star: return "*";
    case Tok::slash: return "/";
    case Tok::caret: return "^";
    case Tok::lparen: return "(";
    case Tok::rparen: return ")";
    case Tok::comma: return ",";
    case Tok::end: return "end of input";
    }
    return "?";
}

std::vector<Token> lex(std::string_view s)
{
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        const char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c)) != 0) {
            ++i;
            continue;
        }
        const std::size_t start = i;
        if (std::isdigit(static_cast<unsigned char>(c)) != 0 || c == '.') {
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])) != 0) {
                ++i;
            }
            if (i < s.size() && s[i] == '.') {
                ++i;
                const std::size_t frac = i;
                while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])) != 0) {
                    ++i;
                }
                if (i == frac && (frac - 1 == start)) {
                    throw ParseError(ParseError::Kind::syntax, start, "malformed number", {"digit"});
                }
            }
            out.push_back({Tok::number, start, std::string(s.substr(start, i - start))});
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) != 0) {
            while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) != 0 || s[i] == '_')) {
                ++i;
            }
            out.push_back({Tok::ident, start, std::string(s.substr(start, i - start))});
            continue;
        }
        Tok k{};
        switch (c) {
        case '\'': k = Tok::prime; break;
        case '+': k = Tok::plus; break;
        case '-': k = Tok::minus; break;
        case '*': k = Tok::star; break;
        case '/': k = Tok::slash; break;
        case '^': k = Tok::caret; break;
        case '(': k = Tok::lparen; break;
        case ')': k = Tok::rparen; break;
        case ',': k = Tok::comma; break;
        default:
            throw ParseError(ParseError::Kind::syntax, start, std::string("unexpected character '") + c + "'");
        }
        out.push_back({k, start, std::string(1, c)});
        ++i;
    }
    out.push_back({Tok::end, s.size(), ""});
    return out;
}

Rational parse_number(const std::string& text)
{
    const auto dot = text.find('.');
    if (dot == std::string::npos) {
        return Rational(text, 10);
    }
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    if (digits.empty()) {
        digits = "0";
    }
    const std::size_t decimals = text.size() - dot - 1;
    mpz_class den = 1;
    for (std::size_t k = 0; k < decimals; ++k) {
        den *= 10;
    }
    Rational r{mpz_class(digits, 10), den};
    r.canonicalize();
    return r;
}

bool is_kernel_name(std::string_view s, Kernel& out)
{
    static constexpr std::pair<std::string_view, Kernel> table[] = {
        {"exp", Kernel::exp}, {"sin", Kernel::sin}, {"cos", Kernel::cos}, {"ln", Kernel::ln}, {"sqrt", Kernel::sqrt}};
    for (const auto& [name, k] : table) {
        if (name == s) {
            out = k;
            return true;
        }
    }
    return false;
}

class Parser {
public:
    Parser(std::string_view text, const SystemFile& ctx, ParseOptions opts)
        : tokens_(lex(text)), ctx_(ctx), opts_(opts)
    {
    }

    Expr run()
    {
        Expr e = parse_expr();
        expect(Tok::end, {"operator", "end of input"});
        return normalize(e);
    }

private:
    const Token& peek() const { return tokens_[pos_]; }
    const Token& take() { return tokens_[pos_++]; }

    [[noreturn]] void fail(const Token& at, const std::string& message, std::vector<std::string> expected = {}) const
    {
        throw ParseError(ParseError::Kind::syntax, at.pos, message, std::move(expected));
    }

    void expect(Tok k, std::vector<std::string> expected)
    {
        if (peek().kind != k) {
            std::string msg = "expected ";
            for (std::size_t i = 0; i < expected.size(); ++i) {
                msg += (i == 0 ? "" : " or ") + expected[i];
            }
            msg += std::string(", found ") + describe(peek().kind);
            fail(peek(), msg, std::move(expected));
        }
        take();
    }

    Expr parse_expr()
    {
        std::vector<Expr> terms{parse_term()};
        while (peek().kind == Tok::plus || peek().kind == Tok::minus) {
            const bool minus = take().kind == Tok::minus;
            Expr t = parse_term();
            terms.push_back(minus ? -t : t);
        }
        return Expr::sum(std::move(terms));
    }

    Expr parse_term()
    {
        std::vector<Expr> factors{parse_unary()};
        while (peek().kind == Tok::star || peek().kind == Tok::slash) {
            const bool divide = take().kind == Tok::slash;
            Expr f = parse_unary();
            factors.push_back(divide ? Expr::power(f, Rational(-1)) : f);
        }
        return Expr::product(std::move(factors));
    }

    Expr parse_unary()
    {
        if (peek().kind == Tok::minus) {
            take();
            return -parse_unary();
        }
        if (peek().kind == Tok::plus) {
            take();
            return parse_unary();
        }
        return parse_power();
    }

    Expr parse_power()
    {
        Expr base = parse_primary();
        if (peek().kind != Tok::caret) {
            return base;
        }
        take();
        const Token& at = peek();
        const Expr exponent = normalize(parse_unary());
        if (!exponent.is_constant()) {
            fail(at, "exponent must be a rational constant");
        }
        return Expr::power(base, exponent.value());
    }

    Expr parse_primary()
    {
        const Token& tok = peek();
        switch (tok.kind) {
        case Tok::number: take(); return Expr(parse_number(tok.text));
        case Tok::lparen: {
            take();
            Expr inner = parse_expr();
            expect(Tok::rparen, {")"});
            return inner;
        }
        case Tok::ident: return parse_identifier();
        default: fail(tok, std::string("expected an operand, found ") + describe(tok.kind), {"number", "identifier", "("});
        }
    }

    Expr parse_identifier()
    {
        const Token tok = take();
        Kernel k{};
        if (is_kernel_name(tok.text, k)) {
            if (peek().kind != Tok::lparen) {
                throw ParseError(ParseError::Kind::arity, tok.pos,
                                 tok.text + " takes exactly one parenthesized argument", {"("});
            }
            take();
            if (peek().kind == Tok::rparen) {
                throw ParseError(ParseError::Kind::arity, peek().pos, tok.text + " takes exactly one argument");
            }
            Expr arg = parse_expr();
            if (peek().kind == Tok::comma) {
                throw ParseError(ParseError::Kind::arity, peek().pos, tok.text + " takes exactly one argument");
            }
            expect(Tok::rparen, {")"});
            return Expr::apply(k, arg);
        }
        std::size_t primes = 0;
        std::size_t prime_pos = peek().pos;
        while (peek().kind == Tok::prime) {
            take();
            ++primes;
        }
        if (tok.text == "t") {
            if (primes != 0) {
                fail(tokens_[pos_ - primes], "time cannot carry derivative primes");
            }
            return var(Variable::time());
        }
        const auto ci = std::find(ctx_.coordinates.begin(), ctx_.coordinates.end(), tok.text);
        if (ci != ctx_.coordinates.end()) {
            const std::size_t limit = opts_.allow_jerk ? 3 : 2;
            if (primes > limit) {
                throw ParseError(ParseError::Kind::too_many_primes, prime_pos,
                                 "at most " + std::to_string(limit) + " primes allowed on '" + tok.text + "'");
            }
            const int index = static_cast<int>(ci - ctx_.coordinates.begin()) + 1;
            return var(Variable::coordinate(index, tok.text, static_cast<int>(primes)));
        }
        if (std::find(ctx_.parameters.begin(), ctx_.parameters.end(), tok.text) != ctx_.parameters.end()) {
            if (primes != 0) {
                fail(tokens_[pos_ - primes], "parameter '" + tok.text + "' cannot carry derivative primes");
            }
            return var(Variable::parameter(tok.text));
        }
        throw ParseError(ParseError::Kind::unknown_identifier, tok.pos, "unknown identifier '" + tok.text + "'");
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    const SystemFile& ctx_;
    ParseOptions opts_;
};

std::vector<std::string> string_array(const nlohmann::json& doc, const char* field)
{
    const auto& v = doc.at(field);
    if (!v.is_array()) {
        throw SchemaError(std::string("field '") + field + "' must be an array of strings");
    }
    std::vector<std::string> out;
    for (const auto& item : v) {
        if (!item.is_string()) {
            throw SchemaError(std::string("field '") + field + "' must be an array of strings");
        }
        out.push_back(item.get<std::string>());
    }
    return out;
}

}  // namespace

bool is_identifier(std::string_view s) noexcept
{
    if (s.empty() || std::isalpha(static_cast<unsigned char>(s.front())) == 0) {
        return false;
    }
    return std::all_of(s.begin(), s.end(),
                       [](char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; });
}

Expr parse_expression(std::string_view text, const SystemFile& context, ParseOptions options)
{
    return Parser(text, context, options).run();
}

SystemFile read_system_file(std::string_view document)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(document);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        throw SchemaError("system document must be a JSON object");
    }
    static const std::set<std::string> known{"n", "coordinates", "parameters", "equations", "lagrangian"};
    for (const auto& [key, _] : doc.items()) {
        if (known.count(key) == 0) {
            throw SchemaError("unknown field '" + key + "'");
        }
    }
    SystemFile file;
    if (!doc.contains("n") || !doc["n"].is_number_integer() || doc["n"].get<long long>() < 1) {
        throw SchemaError("field 'n' must be a positive integer");
    }
    file.n = static_cast<int>(doc["n"].get<long long>());
    if (!doc.contains("coordinates")) {
        throw SchemaError("missing field 'coordinates'");
    }
    file.coordinates = string_array(doc, "coordinates");
    if (doc.contains("parameters")) {
        file.parameters = string_array(doc, "parameters");
    }
    if (static_cast<int>(file.coordinates.size()) != file.n) {
        throw SchemaError("'coordinates' has " + std::to_string(file.coordinates.size()) + " entries, expected n = " +
                          std::to_string(file.n));
    }
    std::set<std::string> seen;
    Kernel unused{};
    for (const auto* list : {&file.coordinates, &file.parameters}) {
        for (const auto& name : *list) {
            if (!is_identifier(name)) {
                throw SchemaError("invalid identifier '" + name + "'");
            }
            if (name == "t" || is_kernel_name(name, unused)) {
                throw SchemaError("reserved name '" + name + "'");
            }
            if (!seen.insert(name).second) {
                throw SchemaError("duplicate identifier '" + name + "'");
            }
        }
    }
    const bool has_eq = doc.contains("equations");
    const bool has_lag = doc.contains("lagrangian");
    if (has_eq == has_lag) {
        throw SchemaError("exactly one of 'equations' or 'lagrangian' is required");
    }
    if (has_eq) {
        file.equations = string_array(doc, "equations");
        if (static_cast<int>(file.equations.size()) != file.n) {
            throw SchemaError("'equations' has " + std::to_string(file.equations.size()) + " entries, expected n = " +
                              std::to_string(file.n));
        }
    } else {
        if (!doc["lagrangian"].is_string()) {
            throw SchemaError("field 'lagrangian' must be a string");
        }
        file.lagrangian = doc["lagrangian"].get<std::string>();
    }
    return file;
}

OdeSystem build_system(const SystemFile& file)
{
    if (file.lagrangian) {
        throw SchemaError("document defines a Lagrangian, not equations");
    }
    OdeSystem sys;
    sys.coordinates = file.coordinates;
    sys.parameters = file.parameters;
    for (std::size_t i = 0; i < file.equations.size(); ++i) {
        try {
            sys.equations.push_back(parse_expression(file.equations[i], file));
        } catch (const ParseError& e) {
            throw ParseError(e.kind(), e.position(), "equation " + std::to_string(i + 1) + ": " + e.detail(),
                             e.expected());
        }
    }
    return sys;
}

OdeSystem load_system(std::string_view document) { return build_system(read_system_file(document)); }

Expr load_lagrangian(const SystemFile& file)
{
    if (!file.lagrangian) {
        throw SchemaError("document has no 'lagrangian' field");
    }
    try {
        return parse_expression(*file.lagrangian, file);
    } catch (const ParseError& e) {
        throw ParseError(e.kind(), e.position(), "lagrangian: " + e.detail(), e.expected());
    }
}

}  // namespace varmech
