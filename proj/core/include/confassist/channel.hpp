#pragma once

#include <vector>

#include "confassist/response.hpp"
#include "confassist/session.hpp"

namespace confassist {

// Text-only channels get flatten_to_text; display-only channels lose
// quick replies but keep the prompt; everything else passes unchanged.
ResponsePayload render_for_channel(const ResponsePayload& payload, const Capabilities& caps);

// Rich display is available to a device group when any member can show
// cards, e.g. a robot once a screen has joined.
bool group_has_rich_display(const std::vector<ChannelDescriptor>& members);

}  // namespace confassist
