#include "recon/calendar.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>

#include <fmt/format.h>

#include "recon/errors.hpp"

namespace recon {

using std::chrono::days;
using std::chrono::sys_days;

namespace {

constexpr std::array<std::string_view, 7> kWeekdayNames = {
    "Sunday", "Monday", "Tuesday", "Wednesday", "Thursday", "Friday", "Saturday"};

Date add_days(Date d, long long n) { return Date{sys_days{d} + days{n}}; }

Date next_weekday(Date d, std::chrono::weekday w) {
  const sys_days s{d};
  return Date{s + (w - std::chrono::weekday{s})};
}

void insert_sorted(std::vector<CalendarEntry>& entries, CalendarEntry e) {
  auto it = std::lower_bound(entries.begin(), entries.end(), e.date,
                             [](const CalendarEntry& a, Date d) { return sys_days{a.date} < sys_days{d}; });
  entries.insert(it, std::move(e));
}

Date first_free(const SurveyCalendar& cal, Date from) {
  while (cal.occupied(from)) from = add_days(from, 1);
  return from;
}

}  // namespace

Date parse_date(std::string_view iso) {
  int y = 0;
  unsigned m = 0;
  unsigned d = 0;
  char tail = 0;
  const std::string s(iso);
  if (s.size() != 10 || std::sscanf(s.c_str(), "%4d-%2u-%2u%c", &y, &m, &d, &tail) != 3) {
    throw ParseError(fmt::format("bad date '{}', expected YYYY-MM-DD", iso));
  }
  const Date out{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
  if (!out.ok()) throw ParseError(fmt::format("no such date '{}'", iso));
  return out;
}

std::string format_date(Date d) {
  return fmt::format("{:04}-{:02}-{:02}", static_cast<int>(d.year()),
                     static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
}

void CampaignPolicy::validate() const {
  if (phase1_interval_days <= 0 || phase2_interval_days <= 0) {
    throw ConfigError("survey intervals must be positive");
  }
  if (phase1_months < 0) throw ConfigError("phase1_months must be >= 0");
  if (event_lag_days < 0) throw ConfigError("event_lag_days must be >= 0");
  if (!start_date.ok()) throw ConfigError("start_date is not a valid date");
  if (!preferred_weekday.ok()) throw ConfigError("preferred_weekday is not valid");
}

std::string_view to_string(EntryKind k) {
  switch (k) {
    case EntryKind::SCHEDULED: return "SCHEDULED";
    case EntryKind::EVENT: return "EVENT";
    case EntryKind::RESCHEDULED: return "RESCHEDULED";
  }
  return "";
}

std::string_view to_string(RescheduleReason r) {
  return r == RescheduleReason::RAIN ? "RAIN" : "EQUIPMENT_UNAVAILABLE";
}

std::optional<RescheduleReason> parse_reschedule_reason(std::string_view s) {
  if (s == "RAIN") return RescheduleReason::RAIN;
  if (s == "EQUIPMENT_UNAVAILABLE") return RescheduleReason::EQUIPMENT_UNAVAILABLE;
  return std::nullopt;
}

std::optional<std::chrono::weekday> parse_weekday(std::string_view s) {
  for (unsigned i = 0; i < kWeekdayNames.size(); ++i) {
    const auto name = kWeekdayNames[i];
    if (s.size() == name.size() || s.size() == 3) {
      bool eq = true;
      for (std::size_t k = 0; k < s.size() && eq; ++k) {
        eq = std::tolower(static_cast<unsigned char>(s[k])) ==
             std::tolower(static_cast<unsigned char>(name[k]));
      }
      if (eq) return std::chrono::weekday{i};
    }
  }
  return std::nullopt;
}

std::string_view weekday_name(std::chrono::weekday w) { return kWeekdayNames[w.c_encoding()]; }

Date SurveyCalendar::horizon_end() const { return add_days(policy.start_date, horizon_days); }

bool SurveyCalendar::occupied(Date d) const {
  return std::any_of(entries.begin(), entries.end(),
                     [d](const CalendarEntry& e) { return sys_days{e.date} == sys_days{d}; });
}

Date phase1_end(const CampaignPolicy& policy) {
  using namespace std::chrono;
  const year_month first{policy.start_date.year(), policy.start_date.month()};
  const year_month last = first + months{policy.phase1_months - 1};
  return Date{year_month_day_last{last.year(), month_day_last{last.month()}}};
}

SurveyCalendar generate_calendar(const CampaignPolicy& policy, int horizon_days) {
  policy.validate();
  if (horizon_days <= 0) throw DomainError("horizon_days must be positive");
  SurveyCalendar cal;
  cal.policy = policy;
  cal.horizon_days = horizon_days;
  const sys_days horizon{cal.horizon_end()};
  const auto push = [&](Date d, const char* note) {
    const Date shifted = next_weekday(d, policy.preferred_weekday);
    if (sys_days{shifted} > horizon) return false;
    cal.entries.push_back({shifted, EntryKind::SCHEDULED, note});
    return true;
  };

  Date anchor = policy.start_date;
  bool have_phase1 = false;
  if (policy.phase1_months > 0) {
    const sys_days limit{phase1_end(policy)};
    for (long long k = 0;; ++k) {
      const Date d = add_days(policy.start_date, k * policy.phase1_interval_days);
      if (sys_days{next_weekday(d, policy.preferred_weekday)} > limit) break;
      if (!push(d, "phase 1")) return cal;
      anchor = d;
      have_phase1 = true;
    }
  }
  for (long long k = have_phase1 ? 1 : 0;; ++k) {
    if (!push(add_days(anchor, k * policy.phase2_interval_days), "phase 2")) break;
  }
  return cal;
}

SurveyCalendar insert_event_survey(const SurveyCalendar& calendar, Date event_date,
                                   std::string note) {
  const sys_days d{event_date};
  if (d < sys_days{calendar.policy.start_date} || d > sys_days{calendar.horizon_end()}) {
    throw RangeError(fmt::format("event date {} lies outside the calendar horizon",
                                 format_date(event_date)));
  }
  SurveyCalendar out = calendar;
  const Date at = first_free(out, add_days(event_date, calendar.policy.event_lag_days));
  insert_sorted(out.entries, {at, EntryKind::EVENT, std::move(note)});
  return out;
}

SurveyCalendar reschedule(const SurveyCalendar& calendar, Date entry_date,
                          RescheduleReason reason, Date earliest_feasible) {
  SurveyCalendar out = calendar;
  auto it = std::find_if(out.entries.begin(), out.entries.end(), [&](const CalendarEntry& e) {
    return sys_days{e.date} == sys_days{entry_date};
  });
  if (it == out.entries.end()) {
    throw NotFoundError(fmt::format("no calendar entry on {}", format_date(entry_date)));
  }
  out.entries.erase(it);
  const Date at = first_free(out, earliest_feasible);
  insert_sorted(out.entries, {at, EntryKind::RESCHEDULED, std::string(to_string(reason))});
  return out;
}

std::string format_calendar_table(const SurveyCalendar& calendar) {
  std::string out = fmt::format("{:<12} {:<10} {:<12} {}\n", "date", "weekday", "kind", "note");
  for (const auto& e : calendar.entries) {
    out += fmt::format("{:<12} {:<10} {:<12} {}\n", format_date(e.date),
                       weekday_name(std::chrono::weekday{sys_days{e.date}}), to_string(e.kind),
                       e.note);
  }
  return out;
}

}  // namespace recon
