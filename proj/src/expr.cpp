#include "lcmg/expr.hpp"

#include <cctype>
#include <cstdlib>
#include <stdexcept>

namespace lcmg {

namespace {

class Parser {
public:
    Parser(const std::string& text, const RingContext& ctx) : text_(text), ctx_(ctx) {}

    RingElement parse() {
        RingElement value = expr();
        skip_space();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return value;
    }

private:
    [[noreturn]] void fail(const std::string& message) const {
        throw std::invalid_argument("expression error at position " + std::to_string(pos_) +
                                    ": " + message + " in \"" + text_ + "\"");
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    bool consume(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_space();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    RingElement expr() {
        RingElement acc = term();
        while (true) {
            if (consume('+'))
                acc += term();
            else if (consume('-'))
                acc -= term();
            else
                return acc;
        }
    }

    RingElement term() {
        RingElement acc = factor();
        while (consume('*')) acc = acc * factor();
        return acc;
    }

    RingElement factor() {
        RingElement base = primary();
        while (true) {
            skip_space();
            if (pos_ < text_.size() && text_[pos_] == '^') {
                ++pos_;
                skip_space();
                if (pos_ < text_.size() && text_[pos_] == '*') {
                    ++pos_;
                    base = involution(base);
                } else {
                    base = power(base, parse_int());
                }
            } else {
                return base;
            }
        }
    }

    long parse_int() {
        skip_space();
        std::size_t start = pos_;
        if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) ++pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        if (pos_ == start || (pos_ == start + 1 && !std::isdigit(static_cast<unsigned char>(
                                                       text_[start]))))
            fail("expected an integer exponent or '*'");
        return std::stol(text_.substr(start, pos_ - start));
    }

    RingElement power(const RingElement& base, long n) {
        if (n < 0) {
            if (base.support_size() != 1)
                fail("negative powers require a single-term monomial");
            const auto& [g, c] = *base.terms().begin();
            RingElement inv = RingElement::monomial(ctx_, ctx_.inverse(g), 1.0 / c);
            return power(inv, -n);
        }
        RingElement acc = RingElement::scalar(ctx_, 1.0);
        for (long i = 0; i < n; ++i) acc = acc * base;
        return acc;
    }

    RingElement primary() {
        skip_space();
        if (pos_ >= text_.size()) fail("unexpected end of expression");
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            RingElement inner = expr();
            if (!consume(')')) fail("missing ')'");
            return inner;
        }
        if (c == '-') {
            ++pos_;
            RingElement value = factor();
            return Complex(-1.0, 0.0) * value;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        fail(std::string("unexpected character '") + c + "'");
    }

    RingElement number() {
        const char* begin = text_.c_str() + pos_;
        char* end = nullptr;
        double value = std::strtod(begin, &end);
        if (end == begin) fail("malformed number");
        pos_ += static_cast<std::size_t>(end - begin);
        return RingElement::scalar(ctx_, value);
    }

    RingElement identifier() {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        std::string name = text_.substr(start, pos_ - start);
        if (name == "i") return RingElement::scalar(ctx_, Complex(0.0, 1.0));
        GroupElement g;
        if (!ctx_.model->lookup_generator(name, g))
            fail("unknown generator '" + name + "' for model " + ctx_.model->name());
        return RingElement::monomial(ctx_, g, 1.0);
    }

    const std::string& text_;
    const RingContext& ctx_;
    std::size_t pos_ = 0;
};

} // namespace

RingElement parse_ring_expression(const std::string& text, const RingContext& ctx) {
    return Parser(text, ctx).parse();
}

} // namespace lcmg
