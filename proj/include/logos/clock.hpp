#pragma once

// Clock riddles: a nested spoken time phrase ("two minutes to five past half
// past one") compiled at authoring time into a base time plus signed minute
// offsets. The digital answer is (base + sum of offsets) mod 1440.

#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include "logos/einstein.hpp"  // GenerationFailure
#include "logos/text.hpp"

namespace logos::puzzle {

struct ClockOffset {
    int minutes = 0;         // signed
    std::string phrase_en;   // contains {inner}
    std::string phrase_pl;
};

struct ClockPuzzle {
    int base_minutes = 0;        // minutes since midnight, 0..1439
    std::vector<ClockOffset> offsets;
    std::string base_phrase_en;
    std::string base_phrase_pl;
    int answer = 0;              // always (base + sum) mod 1440
    bool ampm_fixed = false;     // when true, grading demands the exact 24h time
};

inline int solve_clock(const ClockPuzzle& p) {
    if (p.base_minutes < 0 || p.base_minutes > 1439)
        throw std::invalid_argument("base_minutes out of range");
    long t = p.base_minutes;
    for (const auto& o : p.offsets) t += o.minutes;
    t %= 1440;
    if (t < 0) t += 1440;
    return static_cast<int>(t);
}

inline std::string format_clock(int minutes) {
    int h = minutes / 60, m = minutes % 60;
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%d:%02d", h, m);
    return buf;
}

// Innermost phrase first; each offset wraps the text built so far.
inline std::string render_clock_phrase(const ClockPuzzle& p, Language lang) {
    std::string text = lang == Language::pl ? p.base_phrase_pl : p.base_phrase_en;
    for (const auto& o : p.offsets) {
        std::string wrap = lang == Language::pl ? o.phrase_pl : o.phrase_en;
        replace_all(wrap, "{inner}", text);
        text = std::move(wrap);
    }
    return text;
}

inline std::string render_clock(const ClockPuzzle& p, Language lang) {
    if (lang == Language::pl)
        return "Ktora godzine pokazuje zegar cyfrowy, jesli jest " + render_clock_phrase(p, lang) +
               "? Podaj czas w formacie gg:mm.";
    return "What time does the digital clock show if it is " + render_clock_phrase(p, lang) +
           "? Give the time as h:mm.";
}

namespace detail {

struct ClockHour {
    int hour;  // 1..12
    const char* en;
    const char* pl_nom;  // "pierwsza"  (o'clock forms)
    const char* pl_gen;  // "pierwszej" (after "po" / "do" / "wpol do")
};

inline const std::vector<ClockHour>& clock_hours() {
    static const std::vector<ClockHour> hours = {
        {1, "one", "pierwsza", "pierwszej"},   {2, "two", "druga", "drugiej"},
        {3, "three", "trzecia", "trzeciej"},   {4, "four", "czwarta", "czwartej"},
        {5, "five", "piata", "piatej"},        {6, "six", "szosta", "szostej"},
        {7, "seven", "siodma", "siodmej"},     {8, "eight", "osma", "osmej"},
        {9, "nine", "dziewiata", "dziewiatej"},{10, "ten", "dziesiata", "dziesiatej"},
        {11, "eleven", "jedenasta", "jedenastej"}, {12, "twelve", "dwunasta", "dwunastej"},
    };
    return hours;
}

struct OffsetPhrase {
    int minutes;
    const char* en;  // with {inner}
    const char* pl;
};

inline const std::vector<OffsetPhrase>& clock_offset_phrases() {
    static const std::vector<OffsetPhrase> phrases = {
        {1, "one minute past {inner}", "minuta po {inner}"},
        {2, "two minutes past {inner}", "dwie minuty po {inner}"},
        {5, "five past {inner}", "piec po {inner}"},
        {10, "ten past {inner}", "dziesiec po {inner}"},
        {15, "a quarter past {inner}", "kwadrans po {inner}"},
        {-1, "one minute to {inner}", "minuta przed {inner}"},
        {-2, "two minutes to {inner}", "dwie minuty przed {inner}"},
        {-5, "five to {inner}", "piec przed {inner}"},
        {-10, "ten to {inner}", "dziesiec przed {inner}"},
        {-15, "a quarter to {inner}", "kwadrans przed {inner}"},
    };
    return phrases;
}

}  // namespace detail

// Example 6 as shipped data: "two minutes to five past half past one", read
// on a 12-hour clock with an afternoon base, lands on 13:33.
inline ClockPuzzle classic_clock_puzzle() {
    ClockPuzzle p;
    p.base_minutes = 13 * 60 + 30;
    p.base_phrase_en = "half past one";
    p.base_phrase_pl = "wpol do drugiej";
    p.offsets = {{5, "five past {inner}", "piec po {inner}"},
                 {-2, "two minutes to {inner}", "dwie minuty przed {inner}"}};
    p.answer = solve_clock(p);
    p.ampm_fixed = false;
    return p;
}

// Deterministic riddle: a base phrase (o'clock / half past) wrapped in
// n_offsets spoken offsets. The am/pm reading is left loose (ampm_fixed =
// false), so grading accepts the answer modulo 12 hours.
inline ClockPuzzle generate_clock(std::uint64_t seed, int n_offsets) {
    if (n_offsets < 1 || n_offsets > 4)
        throw GenerationFailure("n_offsets must be in 1..4");
    Rng rng(Rng::mix(seed, 0x636c6f636b67656eull));
    ClockPuzzle p;

    const auto& hours = detail::clock_hours();
    const auto& h = hours[rng.below(hours.size())];
    bool pm = rng.chance(1, 2);
    bool half = rng.chance(1, 2);
    int hour24 = h.hour % 12 + (pm ? 12 : 0);
    if (half) {
        // The instant h:30. English names the hour behind it ("half past
        // one"); Polish names the hour ahead ("wpol do drugiej").
        const auto& next = hours[static_cast<std::size_t>(h.hour % 12)];  // h+1, wrapping
        p.base_minutes = hour24 * 60 + 30;
        p.base_phrase_en = std::string("half past ") + h.en;
        p.base_phrase_pl = std::string("wpol do ") + next.pl_gen;
    } else {
        p.base_minutes = hour24 * 60;
        p.base_phrase_en = std::string(h.en) + " o'clock";
        p.base_phrase_pl = std::string("godzina ") + h.pl_nom;
    }

    const auto& phrases = detail::clock_offset_phrases();
    for (int i = 0; i < n_offsets; ++i) {
        const auto& ph = phrases[rng.below(phrases.size())];
        p.offsets.push_back(ClockOffset{ph.minutes, ph.en, ph.pl});
    }
    p.answer = solve_clock(p);
    p.ampm_fixed = false;
    return p;
}

}  // namespace logos::puzzle
