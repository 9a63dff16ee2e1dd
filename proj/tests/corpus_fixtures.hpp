#pragma once

// Hand-traced discussion-tree fixtures used by both the unit tests and the
// acceptance suite. Expected linearizations and labels were worked out by
// hand from the flattening rule before the implementation existed.

#include <string>
#include <vector>

#include "aim/corpus.hpp"

namespace aimtest {

inline aim::corpus::Comment make_comment(std::string id, std::string parent, std::string author,
                                         std::string body, std::int64_t t) {
    aim::corpus::Comment c;
    c.id = std::move(id);
    c.parent_id = std::move(parent);
    c.author = std::move(author);
    c.body = std::move(body);
    c.created_utc = t;
    return c;
}

inline aim::corpus::Thread make_thread(std::string id, std::string author,
                                       std::vector<aim::corpus::Comment> comments,
                                       std::string body = "", std::string title = "") {
    aim::corpus::Thread t;
    t.id = std::move(id);
    t.author = std::move(author);
    t.title = title.empty() ? "CMV: fixture view on " + t.id : std::move(title);
    t.body = body.empty() ? std::string(120, 'x') + ". Second sentence here." : std::move(body);
    t.split = "train";
    t.comments = std::move(comments);
    return t;
}

inline std::string bot_confirmation(const std::string& user) {
    return "Confirmed: 1 delta awarded to /u/" + user + "\n\n_____\n^(footnote text)";
}

// 1. chain: post -> c1 -> oh1 (delta via token). S = [c1, oh1];
//    pair (c1, 1).
inline aim::corpus::Thread fixture_chain() {
    return make_thread("t3_chain", "oh_user",
                       {
                           make_comment("c1", "t3_chain", "alice", "You missed a premise.", 1),
                           make_comment("oh1", "c1", "oh_user", "Good point. !delta", 2),
                       });
}

// 2. siblings: c1, c2 top level; oh1 under c1 (t earlier), oh2 under c2.
//    S = [c1, oh1, c2, oh2]; pairs (c1, label(oh1)), (c2, label(oh2)).
inline aim::corpus::Thread fixture_siblings() {
    return make_thread("t3_sib", "oh_user",
                       {
                           make_comment("c1", "t3_sib", "alice", "First challenge.", 1),
                           make_comment("c2", "t3_sib", "bob", "Second challenge.", 2),
                           make_comment("oh1", "c1", "oh_user", "Hmm, I see. ∆", 3),
                           make_comment("oh2", "c2", "oh_user", "I still disagree.", 4),
                       });
}

// 3. consecutive OH comments: post -> c1 -> oh1 -> oh2.
//    S = [c1, oh1, oh2]; only c1 is labeled (by oh1).
inline aim::corpus::Thread fixture_consecutive_oh() {
    return make_thread("t3_consec", "oh_user",
                       {
                           make_comment("c1", "t3_consec", "alice", "A challenge.", 1),
                           make_comment("oh1", "c1", "oh_user", "Reply one.", 2),
                           make_comment("oh2", "oh1", "oh_user", "Reply two. !delta", 3),
                       });
}

// 4. missing ancestor: post -> c1 -> c2([deleted]) -> oh1.
//    After filtering, oh1's parent chain breaks at c2: S = [oh1], no pair,
//    one recorded gap.
inline aim::corpus::Thread fixture_missing_ancestor() {
    return make_thread("t3_gap", "oh_user",
                       {
                           make_comment("c1", "t3_gap", "alice", "Top challenge.", 1),
                           make_comment("c2", "c1", "bob", "[deleted]", 2),
                           make_comment("oh1", "c2", "oh_user", "Responding anyway.", 3),
                       });
}

// 5. OH-first: oh1 replies to the post itself, then c1 -> oh2.
//    S = [oh1, c1, oh2]; oh1 has no predecessor; pair (c1, label(oh2)).
inline aim::corpus::Thread fixture_oh_first() {
    return make_thread("t3_ohfirst", "oh_user",
                       {
                           make_comment("oh1", "t3_ohfirst", "oh_user", "Clarifying my view.", 1),
                           make_comment("c1", "t3_ohfirst", "alice", "But consider this.", 2),
                           make_comment("oh2", "c1", "oh_user", "Fair. !delta", 3),
                       });
}

// 6. multi-delta: three challenges; two draw deltas through different
//    signals (bot confirmation and a unicode token), one does not.
inline aim::corpus::Thread fixture_multi_delta() {
    return make_thread("t3_multi", "oh_user",
                       {
                           make_comment("c1", "t3_multi", "alice", "Challenge one.", 1),
                           make_comment("oh1", "c1", "oh_user", "Changed my mind here.", 2),
                           make_comment("bot1", "oh1", "DeltaBot", bot_confirmation("alice"), 3),
                           make_comment("c2", "t3_multi", "bob", "Challenge two.", 4),
                           make_comment("oh2", "c2", "oh_user", "Δ well argued.", 5),
                           make_comment("c3", "t3_multi", "carol", "Challenge three.", 6),
                           make_comment("oh3", "c3", "oh_user", "Not convinced.", 7),
                       });
}

inline std::vector<aim::corpus::Thread> all_tree_fixtures() {
    return {fixture_chain(),      fixture_siblings(),     fixture_consecutive_oh(),
            fixture_missing_ancestor(), fixture_oh_first(), fixture_multi_delta()};
}

} // namespace aimtest
