#include "confassist/channel.hpp"

#include <algorithm>

namespace confassist {

ResponsePayload render_for_channel(const ResponsePayload& payload, const Capabilities& caps) {
  if (!caps.rich_cards) return TextPayload{flatten_to_text(payload)};
  if (caps.display_only) {
    if (const auto* q = std::get_if<QuickReplies>(&payload)) return TextPayload{q->prompt};
  }
  return payload;
}

bool group_has_rich_display(const std::vector<ChannelDescriptor>& members) {
  return std::any_of(members.begin(), members.end(),
                     [](const ChannelDescriptor& c) { return c.capabilities.rich_cards; });
}

}  // namespace confassist
