#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace recon {

using Date = std::chrono::year_month_day;

/// Parses YYYY-MM-DD. Throws ParseError.
Date parse_date(std::string_view iso);
std::string format_date(Date d);

struct CampaignPolicy {
  Date start_date{std::chrono::year{2020}, std::chrono::May, std::chrono::day{1}};
  int phase1_interval_days = 14;
  int phase1_months = 4;
  int phase2_interval_days = 42;
  std::chrono::weekday preferred_weekday = std::chrono::Friday;
  int event_lag_days = 1;

  /// Throws ConfigError on non-positive intervals or negative counts.
  void validate() const;
};

enum class EntryKind { SCHEDULED, EVENT, RESCHEDULED };
enum class RescheduleReason { RAIN, EQUIPMENT_UNAVAILABLE };

std::string_view to_string(EntryKind k);
std::string_view to_string(RescheduleReason r);
std::optional<RescheduleReason> parse_reschedule_reason(std::string_view s);
std::optional<std::chrono::weekday> parse_weekday(std::string_view s);
std::string_view weekday_name(std::chrono::weekday w);

struct CalendarEntry {
  Date date;
  EntryKind kind = EntryKind::SCHEDULED;
  std::string note;

  friend bool operator==(const CalendarEntry&, const CalendarEntry&) = default;
};

/// Survey calendar; entries are sorted with unique dates.
struct SurveyCalendar {
  CampaignPolicy policy;
  int horizon_days = 0;
  std::vector<CalendarEntry> entries;

  [[nodiscard]] Date horizon_end() const;
  [[nodiscard]] bool occupied(Date d) const;
};

/// Last day of the phase-1 window: the end of the `phase1_months`-th
/// calendar month counting the start month as the first.
Date phase1_end(const CampaignPolicy& policy);

SurveyCalendar generate_calendar(const CampaignPolicy& policy, int horizon_days);

/// Adds an EVENT entry `event_lag_days` after `event_date`, skipping forward
/// past occupied days. Throws RangeError when `event_date` lies outside the
/// horizon.
SurveyCalendar insert_event_survey(const SurveyCalendar& calendar, Date event_date,
                                   std::string note);

/// Moves the entry on `entry_date` to the first free day on or after
/// `earliest_feasible`. Throws NotFoundError when no entry has that date.
SurveyCalendar reschedule(const SurveyCalendar& calendar, Date entry_date,
                          RescheduleReason reason, Date earliest_feasible);

/// Fixed-width text table for terminals.
std::string format_calendar_table(const SurveyCalendar& calendar);

}  // namespace recon
