#include "qmin/min_policy.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace qmin {

namespace {

void put_ids(std::ostringstream& out, const std::vector<IntervalId>& ids) {
    out << '(';
    for (std::size_t k = 0; k < ids.size(); ++k) out << (k ? " " : "") << ids[k];
    out << ')';
}

void put_steps(std::ostringstream& out, const std::vector<MinStep>& steps) {
    for (std::size_t k = 0; k < steps.size(); ++k) {
        if (k) out << "; ";
        const auto& s = steps[k];
        switch (s.op) {
            case MinStep::Op::QueryAll:
                out << "all";
                put_ids(out, s.items);
                break;
            case MinStep::Op::Cascade:
                out << "cascade";
                break;
            case MinStep::Op::QueryIfNeeded:
                out << "ifneeded";
                put_ids(out, s.items);
                break;
            case MinStep::Op::BranchOnHit:
                out << "hit";
                put_ids(out, s.items);
                out << "?{";
                put_steps(out, s.on_hit);
                out << "}:{";
                put_steps(out, s.on_miss);
                out << '}';
                break;
        }
    }
}

class Parser {
public:
    explicit Parser(const std::string& text) : text_(text) {}

    MinPolicy policy() {
        MinPolicy p;
        if (take_word("I1First")) {
            p = MinPolicy::i1_first();
        } else if (take_word("Permutation")) {
            p = MinPolicy::permutation(ids());
        } else if (take_word("Trace")) {
            expect('[');
            p = MinPolicy::trace(steps(']'));
            expect(']');
        } else {
            fail("unknown policy kind");
        }
        skip_space();
        if (pos_ != text_.size()) fail("trailing text");
        return p;
    }

private:
    std::vector<MinStep> steps(char close) {
        std::vector<MinStep> out;
        skip_space();
        if (peek() == close) return out;
        while (true) {
            out.push_back(step());
            skip_space();
            if (peek() != ';') break;
            ++pos_;
        }
        return out;
    }

    MinStep step() {
        MinStep s;
        if (take_word("all")) {
            s.op = MinStep::Op::QueryAll;
            s.items = ids();
        } else if (take_word("cascade")) {
            s.op = MinStep::Op::Cascade;
        } else if (take_word("ifneeded")) {
            s.op = MinStep::Op::QueryIfNeeded;
            s.items = ids();
        } else if (take_word("hit")) {
            s.op = MinStep::Op::BranchOnHit;
            s.items = ids();
            expect('?');
            expect('{');
            s.on_hit = steps('}');
            expect('}');
            expect(':');
            expect('{');
            s.on_miss = steps('}');
            expect('}');
        } else {
            fail("unknown step");
        }
        return s;
    }

    std::vector<IntervalId> ids() {
        expect('(');
        std::vector<IntervalId> out;
        while (true) {
            skip_space();
            if (peek() == ')') break;
            if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected interval id");
            IntervalId v = 0;
            while (std::isdigit(static_cast<unsigned char>(peek()))) {
                v = v * 10 + (text_[pos_++] - '0');
                if (v > 1'000'000) fail("interval id too large");
            }
            out.push_back(v);
        }
        ++pos_;
        return out;
    }

    bool take_word(const char* word) {
        skip_space();
        const std::string w(word);
        if (text_.compare(pos_, w.size(), w) != 0) return false;
        pos_ += w.size();
        return true;
    }

    void expect(char c) {
        skip_space();
        if (peek() != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    [[noreturn]] void fail(const std::string& what) const {
        throw std::runtime_error("min policy: " + what + " at offset " + std::to_string(pos_));
    }

    const std::string& text_;
    std::size_t pos_ = 0;
};

}  // namespace

std::string MinPolicy::describe() const {
    std::ostringstream out;
    switch (kind) {
        case Kind::I1First:
            out << "I1First";
            break;
        case Kind::Permutation:
            out << "Permutation";
            put_ids(out, order);
            break;
        case Kind::AlgorithmTrace:
            out << "Trace[";
            put_steps(out, steps);
            out << ']';
            break;
    }
    return out.str();
}

MinPolicy parse_min_policy(const std::string& text) { return Parser(text).policy(); }

}  // namespace qmin
