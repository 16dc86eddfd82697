#include "reluplex/split_stack.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace reluplex {

namespace {

const char* case_name(SplitCase c) {
    return c == SplitCase::Active ? "active" : "inactive";
}

void write_number(std::ostream& out, double v) {
    if (std::isfinite(v)) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        out << buf;
    } else {
        out << (v > 0 ? "\"inf\"" : "\"-inf\"");
    }
}

}  // namespace

void TraceSink::push(std::size_t pair, SplitCase c, unsigned depth) {
    if (!out_)
        return;
    *out_ << "{\"event\":\"push\",\"pair\":" << pair << ",\"case\":\""
          << case_name(c) << "\",\"depth\":" << depth << "}\n";
}

void TraceSink::flip(std::size_t pair, SplitCase c, unsigned depth) {
    if (!out_)
        return;
    *out_ << "{\"event\":\"flip\",\"pair\":" << pair << ",\"case\":\""
          << case_name(c) << "\",\"depth\":" << depth << "}\n";
}

void TraceSink::pop(std::size_t pair, unsigned depth, bool sibling_explored) {
    if (!out_)
        return;
    *out_ << "{\"event\":\"pop\",\"pair\":" << pair << ",\"depth\":" << depth
          << ",\"sibling_explored\":" << (sibling_explored ? "true" : "false")
          << "}\n";
}

void TraceSink::conflict(const Conflict& c, unsigned depth) {
    if (!out_)
        return;
    *out_ << "{\"event\":\"conflict\",\"var\":" << c.var << ",\"lower\":";
    write_number(*out_, c.lower);
    *out_ << ",\"upper\":";
    write_number(*out_, c.upper);
    *out_ << ",\"lower_depth\":" << c.lower_depth
          << ",\"upper_depth\":" << c.upper_depth
          << ",\"cause_depth\":" << c.cause_depth() << ",\"depth\":" << depth
          << "}\n";
}

SplitStack::SplitStack(SimplexState& state, ReluSystem& relus,
                       BoundTightener& tightener, TraceSink* trace)
    : state_(state), relus_(relus), tightener_(tightener), trace_(trace) {}

std::optional<Conflict> SplitStack::push(std::size_t pair, SplitCase first_case) {
    SplitFrame f;
    f.pair = pair;
    f.taken = first_case;
    f.bound_mark = state_.bound_log_size();
    f.derived_mark = tightener_.log_size();
    f.phases = relus_.phases();
    f.repair_counts = relus_.repair_counts();
    frames_.push_back(std::move(f));
    ++pushes_;
    if (depth() > max_depth_)
        max_depth_ = depth();
    state_.set_depth(depth());
    if (trace_)
        trace_->push(pair, first_case, depth());
    return relus_.fix_phase(state_, pair, to_phase(first_case));
}

void SplitStack::restore_frame_snapshot(const SplitFrame& f) {
    state_.unwind_bound_log(f.bound_mark);
    tightener_.truncate_log(f.derived_mark);
    relus_.restore(f.phases, f.repair_counts);
}

SplitStack::Outcome SplitStack::handle_conflict(Conflict conflict) {
    for (;;) {
        unsigned target = conflict.cause_depth();
        if (target > depth())
            target = depth();
        if (trace_)
            trace_->conflict(conflict, depth());

        // Frames deeper than the cause cannot have contributed: discard them
        // without visiting their sibling cases.
        while (depth() > target) {
            const SplitFrame& f = frames_.back();
            restore_frame_snapshot(f);
            if (trace_)
                trace_->pop(f.pair, depth(), f.explored_other);
            frames_.pop_back();
        }
        state_.set_depth(depth());

        // Flip the first frame (deepest first) with an unexplored sibling;
        // exhausted frames are refuted in both cases and keep unwinding.
        std::optional<Conflict> flip_conflict;
        bool flipped = false;
        while (!frames_.empty()) {
            SplitFrame& f = frames_.back();
            restore_frame_snapshot(f);
            if (f.explored_other) {
                if (trace_)
                    trace_->pop(f.pair, depth(), true);
                frames_.pop_back();
                state_.set_depth(depth());
                continue;
            }
            f.taken = other_case(f.taken);
            f.explored_other = true;
            ++flips_;
            state_.set_depth(depth());
            if (trace_)
                trace_->flip(f.pair, f.taken, depth());
            flip_conflict = relus_.fix_phase(state_, f.pair, to_phase(f.taken));
            flipped = true;
            break;
        }
        if (!flipped)
            return Outcome::RootUnsat;
        if (!flip_conflict)
            return Outcome::Backjumped;
        conflict = *flip_conflict;
    }
}

}  // namespace reluplex
