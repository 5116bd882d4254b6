#include "confassist/session.hpp"

#include <algorithm>

#include "confassist/error.hpp"

namespace confassist {

std::string_view to_string(ChannelKind kind) {
  switch (kind) {
    case ChannelKind::webchat: return "webchat";
    case ChannelKind::robot: return "robot";
    case ChannelKind::screen: return "screen";
    case ChannelKind::rest: return "rest";
  }
  return "webchat";
}

ChannelKind channel_kind_from_string(std::string_view name) {
  if (name == "webchat") return ChannelKind::webchat;
  if (name == "robot") return ChannelKind::robot;
  if (name == "screen") return ChannelKind::screen;
  if (name == "rest") return ChannelKind::rest;
  throw Error(ErrorCode::schema_violation,
              "unknown channel kind '" + std::string(name) + "'");
}

ChannelDescriptor ChannelDescriptor::make(ChannelKind kind, bool rest_rich_cards) {
  ChannelDescriptor d;
  d.kind = kind;
  switch (kind) {
    case ChannelKind::webchat:
      d.capabilities = {true, false, true};
      break;
    case ChannelKind::robot:
      d.capabilities = {false, false, true};
      break;
    case ChannelKind::screen:
      d.capabilities = {true, true, true};
      break;
    case ChannelKind::rest:
      d.capabilities = {rest_rich_cards, false, true};
      break;
  }
  return d;
}

std::string slot_text(const SlotValue& value) {
  if (const auto* s = std::get_if<std::string>(&value)) return *s;
  const auto& list = std::get<std::vector<std::string>>(value);
  std::string out;
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (i) out += ", ";
    out += list[i];
  }
  return out;
}

Session::Session(std::string id, ChannelDescriptor channel)
    : id_(std::move(id)), channel_(channel) {}

std::optional<std::string> Session::user_id() const {
  return slot_string(std::string(kUserIdSlot));
}

const SlotValue* Session::slot(const std::string& name) const {
  const auto it = slots_.find(name);
  return it == slots_.end() ? nullptr : &it->second;
}

std::vector<std::string> Session::slot_list(const std::string& name) const {
  const auto* v = slot(name);
  if (v == nullptr) return {};
  if (const auto* list = std::get_if<std::vector<std::string>>(v)) return *list;
  const auto& s = std::get<std::string>(*v);
  if (s.empty()) return {};
  return {s};
}

std::optional<std::string> Session::slot_string(const std::string& name) const {
  const auto* v = slot(name);
  if (v == nullptr) return std::nullopt;
  if (const auto* s = std::get_if<std::string>(v)) return *s;
  return slot_text(*v);
}

const Event& Session::record(EventData data, Instant now) {
  if (!events_.empty() && now < events_.back().timestamp) {
    // Timestamps never go backwards within a session.
    now = events_.back().timestamp;
  }
  if (std::holds_alternative<UserUttered>(data)) {
    ++turn_count_;
    next_seq_ = 0;
  }
  apply(data);
  events_.push_back(Event{std::move(data), turn_count_, next_seq_++, now});
  return events_.back();
}

void Session::apply(const EventData& data) {
  if (const auto* set = std::get_if<SlotSet>(&data)) {
    if (set->unset) {
      slots_.erase(set->name);
    } else if (set->append) {
      auto& current = slots_[set->name];
      if (!std::holds_alternative<std::vector<std::string>>(current)) {
        const auto s = std::get<std::string>(current);
        current = s.empty() ? std::vector<std::string>{} : std::vector<std::string>{s};
      }
      auto& list = std::get<std::vector<std::string>>(current);
      const auto add = [&](const std::string& v) {
        if (std::find(list.begin(), list.end(), v) == list.end()) list.push_back(v);
      };
      if (const auto* s = std::get_if<std::string>(&set->value)) {
        add(*s);
      } else {
        for (const auto& v : std::get<std::vector<std::string>>(set->value)) add(v);
      }
    } else {
      slots_[set->name] = set->value;
    }
  } else if (const auto* act = std::get_if<FormActivated>(&data)) {
    active_form_ = act->name;
  } else if (std::holds_alternative<FormDeactivated>(data)) {
    active_form_.reset();
  } else if (const auto* bot = std::get_if<BotUttered>(&data)) {
    if (!bot->response.template_id.empty()) {
      ++template_uses_[bot->response.template_id];
    }
  }
}

void Session::reset() {
  slots_.clear();
  active_form_.reset();
}

std::size_t Session::template_uses(const std::string& template_id) const {
  const auto it = template_uses_.find(template_id);
  return it == template_uses_.end() ? 0 : it->second;
}

}  // namespace confassist
