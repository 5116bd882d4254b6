#include "scripts.hpp"

namespace confassist::testing {

const std::vector<std::string>& golden_script() {
  static const std::vector<std::string> turns = {
      "Hello",
      "Do you know of any good Indian restaurants?",
      "Not Italian, please.",
      "Sounds great!",
      "How do I get there?",
      "Thank you!",
      "Bye!",
  };
  return turns;
}

const std::vector<Script>& demo_dialogues() {
  static const std::vector<Script> scripts = {
      {"small_talk",
       {"Hello", "Who are you?", "What's the weather like in Seattle?", "Thanks!", "Bye"}},
      {"restaurant",
       {"Hi", "Do you know of any good Indian restaurants?", "Not Italian, please.",
        "Sounds great!", "How do I get there?", "Thank you!", "Bye!"}},
      {"keynotes",
       {"Good morning", "Who are the conference's keynote speakers?",
        "What is the next session about?", "thanks", "goodbye"}},
      {"session",
       {"Hey there", "Can you recommend a session?", "I'm interested in recommendation",
        "yes", "thank you", "bye"}},
      {"running", {"Hello", "Where can I go running?", "no", "how do I get there", "bye"}},
      {"lost", {"hi", "xqzzy blorp", "help", "ok thanks", "bye"}},
      {"museum",
       {"Hello!", "Is there a museum nearby?", "no preference", "sounds good",
        "what is the address", "cheers", "see you"}},
  };
  return scripts;
}

const std::vector<std::string>& sync_script() {
  static const std::vector<std::string> turns = {
      "Hello",
      "Who are you?",
      "Do you know of any good Indian restaurants?",
      "Not Italian, please.",
      "no",
      "what is the address",
      "Sounds great!",
      "How do I get there?",
      "what about by taxi",
      "what is the price",
      "Thanks!",
      "Who are the conference's keynote speakers?",
      "What is the next session about?",
      "Can you recommend a session?",
      "I'm interested in dialogue",
      "no",
      "yes",
      "What's on in Room A?",
      "What's the weather like?",
      "xqzzy blorp",
      "help",
      "Where can I go running?",
      "no",
      "how do I get there",
      "Is there a museum nearby?",
      "no preference",
      "next",
      "yes",
      "thank you",
      "Bye!",
  };
  return turns;
}

const std::vector<std::string>& utterance_pool() {
  static const std::vector<std::string> pool = {
      "Hello", "Hi there", "Who are you?", "What's the weather like in Seattle?",
      "Thanks!", "Bye", "help", "yes", "no", "next", "Sounds great!",
      "Do you know of any good Indian restaurants?", "Not Italian, please.",
      "I like seafood", "I don't like sushi", "no preference", "any good bars?",
      "Is there a museum nearby?", "Where can I go running?", "How do I get there?",
      "what is the address", "what is the price", "how is it rated", "by bus please",
      "Who are the conference's keynote speakers?", "What is the next session about?",
      "Can you recommend a session?", "I'm interested in recommendation",
      "I'm interested in privacy", "what's on tomorrow", "What's on in Room A?",
      "when does Ada Lovelace speak", "xqzzy blorp", "", "the first one was better",
  };
  return pool;
}

}  // namespace confassist::testing
