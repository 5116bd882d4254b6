#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "confassist/nlu.hpp"
#include "confassist/response.hpp"
#include "confassist/time.hpp"

namespace confassist {

enum class ChannelKind { webchat, robot, screen, rest };

std::string_view to_string(ChannelKind kind);
ChannelKind channel_kind_from_string(std::string_view name);

struct Capabilities {
  bool rich_cards = false;
  bool display_only = false;
  bool text = true;

  bool operator==(const Capabilities&) const = default;
};

struct ChannelDescriptor {
  ChannelKind kind = ChannelKind::webchat;
  Capabilities capabilities;

  // Defaults: webchat rich; robot text only; screen rich and display-only;
  // rest text only unless rest_rich_cards is set.
  static ChannelDescriptor make(ChannelKind kind, bool rest_rich_cards = false);
};

using SlotValue = std::variant<std::string, std::vector<std::string>>;

std::string slot_text(const SlotValue& value);

struct UserUttered {
  NluResult nlu;
};
struct BotUttered {
  Response response;
};
struct SlotSet {
  std::string name;
  SlotValue value;
  // List slots: value elements are appended (deduplicated) instead of
  // replacing the list.
  bool append = false;
  // Removes the slot entirely; value is ignored.
  bool unset = false;
};
struct FormActivated {
  std::string name;
};
struct FormDeactivated {
  std::string name;
};
struct SkillInvoked {
  std::string name;
  std::string operation;
};
struct ActionFailed {
  std::string message;
};

using EventData = std::variant<UserUttered, BotUttered, SlotSet, FormActivated,
                               FormDeactivated, SkillInvoked, ActionFailed>;

struct Event {
  EventData data;
  int turn = 0;
  int seq = 0;
  Instant timestamp{};
};

using SlotMap = std::map<std::string, SlotValue>;

inline constexpr std::string_view kUserIdSlot = "user_id";

// Event-sourced conversation state. Every state change goes through
// record(); the log is never edited.
class Session {
 public:
  Session(std::string id, ChannelDescriptor channel);

  const std::string& id() const { return id_; }
  const ChannelDescriptor& channel() const { return channel_; }
  const std::vector<Event>& events() const { return events_; }
  const SlotMap& slots() const { return slots_; }
  const std::optional<std::string>& active_form() const { return active_form_; }
  int turn_count() const { return turn_count_; }

  std::optional<std::string> user_id() const;
  const SlotValue* slot(const std::string& name) const;
  std::vector<std::string> slot_list(const std::string& name) const;
  std::optional<std::string> slot_string(const std::string& name) const;

  // Appends an event and applies its effect. UserUttered opens a new turn.
  const Event& record(EventData data, Instant now);

  // Clears slots and the active form; keeps the event log and turn count.
  void reset();

  // Number of BotUttered events in this session rendered from template_id.
  std::size_t template_uses(const std::string& template_id) const;

 private:
  void apply(const EventData& data);

  std::string id_;
  ChannelDescriptor channel_;
  std::vector<Event> events_;
  SlotMap slots_;
  std::optional<std::string> active_form_;
  int turn_count_ = 0;
  int next_seq_ = 0;
  std::map<std::string, std::size_t> template_uses_;
};

}  // namespace confassist
