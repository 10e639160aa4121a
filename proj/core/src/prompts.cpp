#include "taskforge/prompts.hpp"

#include "taskforge/errors.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace taskforge::prompts {

std::string substitute(const std::string& text,
                       const std::map<std::string, std::string>& subs) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '{') {
      std::size_t close = text.find('}', i + 1);
      if (close != std::string::npos) {
        std::string key = text.substr(i + 1, close - i - 1);
        auto it = subs.find(key);
        if (it != subs.end()) {
          out += it->second;
          i = close;
          continue;
        }
      }
    }
    out += text[i];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Prompt assets
// ---------------------------------------------------------------------------

const std::string& task_generator() {
  static const std::string text = R"PROMPT(You are a capable UI understanding agent. You will be provided a set of images from the {PLATFORM} app that shows different features and the current state of the app. Your task is to convert the described functionalities into a list of tasks that a useful UI understanding agent should be able to complete. Use the images from the app to ground these tasks to the ones that are feasible. Propose as many diverse tasks as possible to cover broad range of features.

For all described and demonstrated functionalities output a list of up to {NUM_TASKS} unique tasks that can be executed in the app as a JSON which should be in the following format:

tasks = [
    {
        "thought": "<Detailed thought and reasoning for the proposed task, why is the task simple enough to execute and whether it satisfies the task proposal guidelines>",
        "instruction": <natural language instruction describing a task with/without template params with name of the app>,
        "tag": <few words describing the type of task>,
        "app_name": <name of the app>,
        "template params": {
            "param_name": {
                "description": <param description>,
                "possible_values": [<list of 5 random values>]
            }
        }
    }
]

{TASK_GUIDELINE_PROMPT}

{ENVIRONMENT_CONTEXT}
)PROMPT";
  return text;
}

const std::string& no_exploration_generator() {
  static const std::string text = R"PROMPT(You are a capable UI understanding agent. You will be provided a app description for the Android app. Your task is to propose a list of tasks that a useful UI understanding agent should be able to complete. Use the app description provided to ground these tasks to the ones that are feasible. Propose as many diverse tasks as possible to cover broad range of features.

App description: {app_description}

For all described functionalities output a list of up to {NUM_TASKS} unique tasks that can be executed in the app as a JSON which should be in the following format:

tasks = [
    {
        "thought": "<Detailed thought and reasoning for the proposed task, why is the task simple enough to execute and whether it satisfies the task proposal guidelines>",
        "instruction": <natural language instruction describing a task with/without template params with name of the app>,
        "tag": <few words describing the type of task>,
        "app_name": <name of the app>,
        "template params": {
            "param_name": {
                "description": <param description>,
                "possible_values": [<list of 5 random values>]
            }
        }
    }
]

{TASK_GUIDELINE_PROMPT}
)PROMPT";
  return text;
}

const std::string& summarizer() {
  static const std::string text = R"PROMPT(You are a capable UI understanding agent. You will be provided a sequence of images from an app or a website that shows how to access different features and the data currently stored in the app. Your task is to summarize the actions taken and features, functionalities navigated and interacted with by the user in detail.

Your task is to output the information in following format:
{

    "action summary": "A bulleted list of actions taken and pages visited to explore the features and functionalities explored by the agent that can enable generation of meaningful UI control tasks. Describe the pages and features visited in the order they were explored."

    "data stored": "A bulleted list of data found on the explored by the agent that can enable generation of meaningful UI control tasks. Describe the data uncovered in the order of the features visited as they were explored."
}
)PROMPT";
  return text;
}

const std::string& planner() {
  static const std::string text = R"PROMPT(You are a capable GUI assistant designed to help users navigate and interact with mobile applications. At the beginning of each task, you will be provided with a natural language description of the task.

Then, at each step, you will be provided with:
1. the screen image.
2. the history of actions taken on the environment and any feedbacks from an expert critic
3. feedback on the last action taken.

Your task is to analyze the goal, current screen, history of actions and feedback about the last action, think step-by-step and generate a natural language plan that clearly describes the next action with relevant details element or area on the screen for interaction. Finally, also output the next action described in natural language a single sentence. Only plan for next action using actions described above. Drag action is not supported, use clicks instead of drag.

Here are some more guidelines:
1. If the task has been completed, you should call the terminate action.
2. Avoid getting stuck in trying to call the same action over and over again. If you think you are stuck, try to find alternative ways to complete the task.
3. Try to accomplish the task with the least number of actions.
4. If the previous action failed, take corrective action by taking an alternative action.

Goal: {TASK_INSTRUCTION}

Action History:
{ACTION_HISTORY}

Critic Response for Last Action:
{REFLECTION_LLM_RESPONSE}

Summary of screen changes:
{TRANSITION_SUMMARY}

Instructions: Based on the goal, current screen, history of actions containing feedback about the last action, think step-by-step and provide the plan and next action.

At each timestep output the next action in following format:
{
    reason: "Step-by-step thinking for the action to be taken.",

    action: "The action to be taken. Choose one of the available actions. tap_on_element if you want to tap on an element, long_press_on_element if you want to long press on a element/location, type_text_in_element if you want to type text in an element, scroll_screen if you want to scroll the screen, answer if you want to answer the question asked by the user, terminate if you want to terminate the session, navigate_back if you want to navigate to previous screen, navigate_home if you want to navigate to the home screen, wait if you want to wait for 5 seconds before continuing, open_app if you want to open a specific app.",

    element_description: "A descriptions containing visual and textual details as well as spatial location of the UI element to be interacted with. Only set the element description if the action is tap_on_element, long_press_on_element, or type_text_in_element, otherwise set the element description to be an empty string. Examples of descriptions: circular design with a pattern resembling a camera shutter or a mandala, in white on a light brown background. Otherwise set the element description to be an empty string. Select the checkbox next to the label 'Remember me'.",

    text: "The text to be entered in the UI element. Only set with value to type in the text element.",

    direction: "The direction to scroll the screen. Can be one of [UP, DOWN, LEFT, RIGHT].",

    answer: "The answer to the question asked by the user. Only set this field if the action is answer, otherwise set the answer to be an empty string.",

    app_name: "The name of the app to be opened. Only set this field if the action is open_app, otherwise set the app_name to be an empty string."
}

Current Observation:
{OBSERVATION}
)PROMPT";
  return text;
}

const std::string& reflection() {
  static const std::string text = R"PROMPT(You are an expert in interacting and navigating mobile applications. Your task is to provide useful feedback for a human to achieve a provided goal.

You will be given:
1. the screen image with detected elements before the human takes an action.
2. the description of the action the human takes along with any reason and references to detected elements before.
3. the screen image with detected elements after the human takes an action.

Your task is to think carefully and analyze the current action, as well as the screen before and after the action. Use this information to describe the changes in the screen and provide feedback about whether
the action was successful or not.
If the action changes state on the screen but does not open a new view, focus on the element which was effected to assess success.
If the action was a scroll or swipe and the UI elements did not change, the action likely failed.
If the action was to type in the text field, the evaluation should be whether or not the textfield has the exact text typed in.
Don't tell the human what to do, just provide feedback on whether the action was successful or not.


Goal: {TASK_INSTRUCTION}

Observation before action:
{PREVIOUS_OBSERVATION}

Action executed:
{ACTION}

Observation after action:
{CURRENT_OBSERVATION}
)PROMPT";
  return text;
}

const std::string& grounder() {
  static const std::string text = R"PROMPT(You are an expert UI element locator. Given a GUI image and a user's element description, provide the coordinates of the specified element as a single (x,y) point. The image resolution is height {HEIGHT} and width {WIDTH}. For elements with area, return the center point.

Output the coordinate pair exactly:
(x,y)

Task Instruction: {TASK_INSTRUCTION}
{CURRENT_OBSERVATION}
)PROMPT";
  return text;
}

const std::string& verifier() {
  static const std::string text = R"PROMPT(You are an AI assitant designed to help users evaluate whether a specific interaction with mobile application was successful or not. At the begining of the task you will be provided:

1. a description of the task
2. a sequence of UI screenshots interleaved with actions taken in order to complete the specified task

For each action taken, you will be provided the action type, location shown on the screen with red dot indicating where the interaction executed, and reason for the action taken.

Your task is to carefully look at all the screenshots shown, the description of the task, and actions taken to evaluate whether the specified task was completed or not. A task is only considered completed if the screenshots only show the intended task being achieved. If the screens show any unintended changes to the state of the app then the demonstration of task is treated as a failure.

Task instruction: {TASK_INSTRUCTION}

Observations: {OBSERVATIONS_WITH_ACTIONS}

You should output the evaluation response in the following JSON format:
{
  "screen_details": "A bulleted list of all the changes on the screens as a result of all actions executed. Even if the screen change do not correspond to the intended actions, you should still describe the screen changes. Create a detailed list of all the UI changes that occurred on the screen as a result of all the actions."

  "reasoning": "Step-by-step reasoning for the assesment of whether the agent was successful for the current step or if the agent has failed for the current step.",

  "result": "Assessment of the task completion given the last screen. Choose one of the available assessment result.success if the agent has successfully completed the assigned task, fail if you think the agent was unsuccessful in performing the given task"
}
)PROMPT";
  return text;
}

const std::string& categorizer() {
  static const std::string text = R"PROMPT(You are a helpful assistant that can help me analyze the task can identify the task categories which uniquely describe the types of tasks and skills required by a GUI agent to complete the task. As input you will be provided a list of task instructions and your task is to output the list of task categories that apply to the specified instructions. Next, we will list the type of task categories you need to label each task using following categories:

{TASK_CATEGORIES}


For each task instruction, you have to output a response in JSON format.
- A list of task categories that apply to the specific task instruction.
- Use only the list of task categories listed above as part of the response.


Here are some examples of task categorization:
Instructions: [
"Create a timer with {hours} hours, {minutes} minutes, and {seconds} seconds. Do not start the timer.",
"Add the expenses from expenses.jpg in Simple Gallery Pro to pro expense.",
"Change the theme to {theme} in the Audio Recorder app."
]
Output:

[
    {
        "task_instruction": "Create a timer with {hours} hours, {minutes} minutes, and {seconds} seconds. Do not start the timer.",
        "task_categories": [
            "create",
            "complex ui interaction"
        ]
    },
    {
        "task_instruction": "Add the expenses from expenses.jpg in Simple Gallery Pro to pro expense.",
        "task_categories": [
            "create",
            "cross app interaction",
            "fill form"
        ]
    },
    {
        "task_instruction": "Change the theme to {theme} in the Audio Recorder app.",
        "task_categories": [
            "edit app setting"
        ]
    }
]

Next, you will be provided 10 tasks as input and your task is to output a JSON in specified format:

Instructions: {TASK_INSTRUCTIONS}
)PROMPT";
  return text;
}

const std::string& iterative_proposer() {
  static const std::string text = R"PROMPT(You are a capable UI understanding agent helping to collect interaction data in the {APP_NAME} app. You will be shown the most recent screens from the app and a list of subtasks already executed with their outcomes.

Propose the next short-horizon subtask: a concrete interaction that can be completed in at most {SUBTASK_STEPS} steps from the current screen. Prefer subtasks that build on what has been done so far and touch features or data visible on the screens.

Subtasks executed so far:
{SUBTASK_HISTORY}

Recent screens:
{RECENT_OBSERVATIONS}

Output a JSON object:
{
    "subtask": "<one sentence instruction for the next short-horizon subtask>"
}
)PROMPT";
  return text;
}

const std::string& iterative_relabel() {
  static const std::string text = R"PROMPT(You are a capable UI understanding agent. You executed a chain of short-horizon subtasks in the {APP_NAME} app. Relabel the full chain as a single long-horizon task a user could have asked for upfront.

Subtasks executed (with outcomes):
{SUBTASK_HISTORY}

Output a JSON object:
{
    "thought": "<why this long-horizon task matches the executed chain>",
    "instruction": "<natural language instruction describing the full task with name of the app>",
    "tag": "<few words describing the type of task>",
    "app_name": "{APP_NAME}",
    "template params": {}
}
)PROMPT";
  return text;
}

std::string exploration_goal(const std::string& app) {
  if (app.empty()) throw InvalidInputError("exploration_goal: empty app name");
  static const std::string text =
      "Explore the {APP_NAME} app exhaustively to access all features, functionalities and "
      "data stored on the app.";
  return substitute(text, {{"APP_NAME", app}});
}

// ---------------------------------------------------------------------------
// Guidelines
// ---------------------------------------------------------------------------

namespace {

std::vector<GuidelinePrompt> build_guidelines() {
  std::vector<GuidelinePrompt> gs;

  gs.push_back(GuidelinePrompt{
      "feature_use", Platform::mobile, "Feature-Use Task Guidelines (Mobile)",
      R"G(For each functionality/feature make sure to follow these guidelines while generating tasks:
1. Create all possible tasks. For example, if there is a clock app on the phone which has worldwide clock feature then you can create tasks like: "Add worldwide clock for <city>", "Remove worldwide clock for <city>", "Add worldwide clock for <city_1, city_2> and reorder to put <city_2> before <city_1>". Make sure to add the <param> details in "template params" in JSON to allow creation of diverse tasks.
2. In any instruction if there are going to be templated parameters then add it in following format: {param_name}
3. If a task requires creating/adding/editing/deleting any information/event/entry make sure all required entities for completing the task are parameterized/templated. For example:
    a.) For a task that requires creating notes both the name of the new note and content of the note should be specified as parameters.
    b.) Similarly, if a task requires editing some details describe the exact edit you'd like to make, what entity needs to be edited. When proposing such tasks, only ask edits to existing entities shown in the images from the app for such tasks. If no such entities exist ask the agent to first create one and then edit it.
    c.) If a task requires deleting an entity, describe the entity that needs to be deleted. When proposing such a task, only ask to delete an entity that already exists as shown in the images from the app for such tasks. If no such entities exist ask the agent to first create one and then delete it.
    d.) If a task requires copying an entity, describe the entity that needs to be copied and where it should be copied to (ex: which folder or date). When proposing such a task, only ask to copy an entity that already exists as shown in the images from the app for such tasks. If no such entities exist ask the agent to first create one and then copy it.
    e.) For all parameters that are templated if any parameter refers to an entity for edit, delete or copy task make sure that the list of possible values only contain entities that exists or will be created.
4. Ensure that instructions are unambiguous and clearly describes a actual task that can be performed on the app.
5. Do not include tasks that require accessing/uploading/capturing content from real world. For example, scanning a document, recording a new video, taking a picture using camera.
6. Task instructions should be natural user requests someone might actually ask a capable UI agent to complete on the app.
7. If any supports browsing information from the web or library make sure to include that in the task instruction. For example, if a task requires searching for a book on the web, make sure to include that in the task instruction.)G"});

  gs.push_back(GuidelinePrompt{
      "information_retrieval", Platform::mobile, "Information Retrieval Task Guidelines (Mobile)",
      R"G(For each proposed task make sure to follow these guidelines:
1. Create tasks that require retrieving different types of information that are useful for a user to make decisions. These tasks should be natural user requests someone might ask in real world. For example, if there is a calendar app on the phone you can propose tasks like: "How many meetings do I have scheduled for {date}?", "What meetings do I have to attend between {start_time} and {end_time} on date {date}? List each event separated by comma". Make sure to add each templated param {param} in "template params" in JSON to allow creation of diverse tasks.
2. Task instructions should be natural user requests someone might actually ask a capable UI agent to complete on the app. For example, "Check the current sample rate set in the Audio Recorder app." is a bad task because of how it is specified. Instead, propose tasks like "What is the current sample rate set in the Audio Recorder app?" or "Can you tell me the current sample rate set in the Audio Recorder app?". The latter two tasks are better because they explicitly ask for the information to be retrieved and are more natural user requests.
3. For all such tasks, also generate a "answer" field in the task JSON which contains a natural language answer to the task. This answer should be a valid answer that can be retrieved from the app. For example, if the task is "What is the weather forecast for {city} on {date}?", the answer should be a valid weather forecast for the specified city and date.
4. For any task instruciton if there are going to be templated parameters then add it in following format: {param_name}
5. For all such task propose different varieties of information retrieval tasks that require searching for information in the app and covers different features. Here are some examples for different apps:
    a.) For a notes app, you can ask "How many todos I have listed in the notes app?", "What todos are pending for today in the list from note app?",etc.
    b.) For a fitness app, "What workouts do I have planned for this week?", "How long did I workout in last week?", etc.
6. Only proposes tasks where the last action the agent should require to solve the task is to return a natural language response with the information requested to the user. For example, "What is the weather forecast for {city} on {date}?" is a good task because it requires the agent to return a natural language response with the weather forecast for the specified city and date. Whereas, "How do I view the weather forecast?" or "How can I set the city to {city} in weather app?" is not a good task because it does not specify the information to be retrieved and requires the agent to show a demonstration in the app to view the weather forecast.
7. Do not propose ambiguous tasks that do not specify the information to be retrieved. For example, "What is the weather like?" is too generic and should be avoided. Instead, propose tasks like "What is the weather forecast for {city} on {date}?".
8. If any app supports browsing information from the web or library make sure to include tasks that require searching information from web. For example, "How much is the price of a book titled {book}?", etc.)G"});

  gs.push_back(GuidelinePrompt{
      "feature_composition", Platform::mobile, "Feature Composition Task Guidelines (Mobile)",
      R"G(For each task proposed make sure to follow these guidelines:
1. Each task should be a composition of multiple subtasks that require a UI agent to execute sequence of subtasks across multiple functionalities/subtasks. For example, if there is a clock app on the phone which has worldwide clock, alarms, and timer feature then you can create tasks like: "Add worldwide clock for {city} then set an alarm for {time} on days {}", "Remove worldwide clock for {city} and set a timer for {hour} hours, {minute} minutes", "Delete the alarm for {time} and delete all the world clocks". Make sure to add each templated {param} details in "template params" in JSON to allow creation of diverse variants of each tasks.
2. Task instructions should be natural user requests, unambiguous and clearly describes a actual task that can be performed on the app. For example, "Create a calendar event for meeeting titled {title} at {time} on {date} for duration {duration} for meeting with Bob then delete the first event on {date2}" is a good task as it specifies all required details. In contrast, a task like "Create a calendar event for titled {title} on {date} then delete the first event on {date2}" is a bad task as it does not specify the start time/duration of the event.
2. For any instruction if there are going to be templated parameters then specify it in following format in the instruction: {param_name}
3. For all such tasks that require creating/adding/editing/deleting any information/event/entry make sure all required entities for completing the task are parameterized/templated. For example:
    a.) For notes app, "Create a note titled {note_title} with content {note_content} in {folder} folder and then delete note titled {note_title_2}" is a good task as it templates the title, content, and location of notes.
    b.) For expense app, "Create expenses for {expense_name_1}, amount {amount_1}, category {category_1}, note {note_1} followed by expense {expense_name_2}, amount {amount_2}, category {category_2}, note {note_2} and then delete all duplicate expenses".
    c.) For files app, you can ask "Search for file named {name_1} and then go delete the files named {name_2}, {name_3}".
4. Do not include tasks that require accessing/uploading/capturing content from real world. For example, scanning a document, recording a new video, taking a picture using camera.
5. If any app supports browsing information from the web or library make sure to include that in the task instruction. For example, if a task requires searching for a book on the web, make sure to include that in the task instruction.)G"});

  gs.push_back(GuidelinePrompt{
      "subtask_repetition", Platform::mobile, "Subtask Repetition Task Guidelines (Mobile)",
      R"G(For each task proposed make sure to follow these guidelines:
1. Each task instruction you propose should repeatedly ask to execute the same feature or subtask for a single functionality. For example, if there is a calendar app on the phone which has multiple calendar events then you should propose tasks like: "Delete events {event_1}, {event_2}, {event_3}", "Delete all events on date {date_1} {date_2}", "Delete events {event_1} on {date_1}, {event_2} on {date_2}, {event_3} on {date_3}" and so on. Make sure to add each templated {param} details in "template params" in JSON to allow creation of diverse variants of each tasks. Make sure the for each instance of event in template params unique values from screenshots shown are used.
2. Task instructions should be natural user requests, unambiguous and clearly describes a actual task that can be performed on the app. The instructions can specify same task in different ways. For example, "Delete all events on {date_1}" can also be specified as "Delete all events on {day} of the {week}", and a task like "Delete all events on this weekend" can be specified as "Delete all events on Saturay and Sunday of current week".
3. Also specify tasks in various ways that require inferring details of the entity being referred by looking at details from the screenshot. For example, if the app is a expense app you can specify tasks like "Delete expenses that have expense amount greater than {amount}" or "Delete all expenses that are in {category} category" or "Delete all expenses that have a note containing {note_content}".
4. Propose tasks that require repeatedly executing same feature for all types of tasks like create/delete/edit. For example, if the app is a notes app you can propose tasks like "Create notes titled {note_1}, {note_2}, {note_3} with content {content_1}, {content_2}, {content_3}", "Delete notes titled {note_1}, {note_2}, {note_3}", "Edit notes titled {note_1} to change content to {new_content_1}, edit note titled {note_2} to change content to {new_content_2}" and so on.
5. For any instruction if there are going to be templated parameters then specify it in following format in the instruction: {param_name}
6. Do not include tasks that require accessing/uploading/capturing content from real world. For example, scanning a document, recording a new video, taking a picture using camera.
7. If any app supports browsing information from the web or library make sure to include that in the task instruction. For example, if a task requires searching for a book on the web, make sure to include that in the task instruction.)G"});

  gs.push_back(GuidelinePrompt{
      "feature_use", Platform::desktop, "Feature-Use Task Guidelines (Desktop)",
      R"G(For each functionality/feature make sure to follow these guidelines while generating tasks:
1. Create all possible tasks that use features shown by the demonstrations. For example, if there is a code IDE app on the desktop then you can propose tasks like: "Create a new project at path <path> from UI or terminal", "Install an extension <extension_name> for auto formatting text", "Change the settings of my editor to set line-length to <value>", etc. Make sure to add the <param> details in "template params" in JSON to allow creation of diverse tasks.
2. In any instruction if there are going to be templated parameters then add it in following format: {param_name}
3. If a task requires creating/adding/editing/deleting any information/event/entry make sure all required entities for completing the task are parameterized/templated. For example:
    a.) For a task that requires creating a new file in a coding IDE specify the name of the file, location, and content of the file as parameters. Similarly, if a task requires creating a new project specify the name of the project, location, and any other required details as parameters.
    b.) If a task requires editing some details describe the exact edit you'd like to make, what entity needs to be edited. When proposing such tasks, only ask edits to existing entities shown in the images from the app for such tasks. If no such entities exist ask the agent to first create one and then edit it. For example, if a task requires editing a image in image editing app, specify the image to be edited, the edit to be made, and any other required details as parameters.
    c.) If a task requires deleting an entity, describe the entity that needs to be deleted. When proposing such a task, only ask to delete an entity that already exists as shown in the images from the app for such tasks. If no such entities exist ask the agent to first create one and then delete it.
    d.) If a task requires copying an entity, describe the entity that needs to be copied and where it should be copied to (ex: which folder or date). When proposing such a task, only ask to copy an entity that already exists as shown in the images from the app for such tasks. If no such entities exist ask the agent to first create one and then copy it.
    e.) For all parameters that are templated if any parameter refers to an entity for edit, delete or copy task make sure that the list of possible values only contain entities that exists or will be created.
4. Ensure that instructions are unambiguous and clearly describes a actual task that can be performed on the app.
5. Task instructions should be natural user requests someone might actually ask a capable UI agent to complete on the app.
6. If any supports browsing information from the web or library make sure to include that in the task instruction. For example, if a task requires searching for a book on the web, make sure to include that in the task instruction.)G"});

  gs.push_back(GuidelinePrompt{
      "feature_composition", Platform::desktop, "Feature Composition Task Guidelines (Desktop)",
      R"G(Available Primitives:
- search: searches for something using the search bar. You can optionally filter the results based on the given criteria.
- filter: filters the results based on the given criteria. You can compose multiple filters to form a single filter. A filter can be direct, or it needs to be inferred using multi_hop_reasoning.
- edit: edit/modifies a property (changing to celsius, sorting results, comparing, modifying the view by clicking on a button, etc.)
- delete: deletes something from the page. can also be used to delete something from the cart.
- add: add something to the cart. You can combine multiple add primitives, you can also add multiple quantities of the same item.
- multi_hop_reasoning: criteria for selection/filtering is not mentioned directly, but requires reasoning to be performed. Examples: "one month from now", "30% of an income of $8000".
- repeat: repeats the results based on the given criteria. Example: add red wine, white wine. Add 2 bottles.
- navigate: navigates to the given URL, click on a link to navigate to its page. select one of the entries from a list.
- form: fills out a form (contact, login, enter numbers to perform a calculation, filling in zip code, etc.). We can stack multiple forms to create a task.
- and: logical operation

For each functionality/feature make sure to follow these guidelines while generating tasks:
1. Generate 10 unique tasks each with 2, 4, 6 primitives in your task composition (minimum 3, maximum 6). Make sure the tasks are diverse and use diverse composition of primitives. Always include atleast a few tasks which uses multi_hop_reasoning, repeat, and add primitives.
2. Task instructions should be natural user requests someone might actually ask a capable UI agent to complete on the app. Tasks should be motivated by daily use cases.
3. For any instruction if there are going to be templated parameters then add it in following format: {param_name}
4. Ensure that instructions are unambiguous and clearly describes an actual task that can be performed.
5. Create realistic, executable tasks that combine multiple primitives logically in a meaningful sequence.
6. Include primitive composition as a function-like string (e.g., "search(product, filter=[filter(price, 50), filter(location, NYC)])")
7. For all tasks that require creating/adding/editing/deleting any information/entity make sure all required entities for completing the task are parameterized/templated. For example:
   a.) For tasks that require adding items, both the item details and quantities should be specified as parameters.
   b.) For tasks that require filtering, the filter criteria should be templated to allow diverse task variants.
   c.) For tasks requiring multi-hop reasoning, the reasoning criteria should be clearly parameterized.
8. IMPORTANT: Do not include tasks that require accessing/uploading/capturing content from real world. For example, scanning documents, recording videos, taking pictures using camera.
9. IMPORTANT: Do not generate tasks which require login.
10. Tasks should demonstrate composition of primitives working together, not just sequential execution of unrelated actions.
11. Include template parameters where appropriate for task variation, with at least 5 possible values for each parameter.
12. Use the provided image context to ground the task in the screenshots. Don't hallucinate any template parameters.)G"});

  return gs;
}

}  // namespace

const std::vector<GuidelinePrompt>& builtin_guidelines() {
  static const std::vector<GuidelinePrompt> gs = build_guidelines();
  return gs;
}

const GuidelinePrompt* find_guideline(const std::string& id, Platform platform) {
  for (const auto& g : builtin_guidelines())
    if (g.guideline_id == id && g.platform == platform) return &g;
  return nullptr;
}

std::vector<GuidelinePrompt> load_guidelines_dir(const std::string& dir, Platform platform) {
  std::vector<GuidelinePrompt> out;
  namespace fs = std::filesystem;
  if (!fs::exists(dir)) return out;
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file()) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& p : files) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    out.push_back(GuidelinePrompt{p.stem().string(), platform, p.stem().string(), ss.str()});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Taxonomies
// ---------------------------------------------------------------------------

const std::vector<CategoryDef>& taxonomy(Platform p) {
  static const std::vector<CategoryDef> mobile = {
      {"create", "creates a new entity in the app."},
      {"edit", "modifies an existing entity in the app."},
      {"delete", "deletes an entity from the app."},
      {"search",
       "searches for something using the search bar. You can optionally filter the results "
       "based on the given criteria."},
      {"filter",
       "filters the results based on the given criteria. You can optionally compose multiple "
       "filters to form a single filter. A filter can be direct, or it needs to be inferred "
       "using multi hop reasoning."},
      {"repeat operation",
       "repeatedly applies a certain create/edit/delete/search operation multiple times to "
       "execute a task. For example, deleting multiple events in calendar or all events on a "
       "single day."},
      {"information retrieval",
       "retrieves information from the app. This can involve answering questions about certain "
       "setting or data from an app"},
      {"multi hop reasoning",
       "involves reasoning across multiple steps or pieces of information to arrive at a "
       "conclusion. For example, answering a question that requires searching for data using "
       "multi-hop reasoning."},
      {"edit system setting", "modifies a setting at the system level on the device."},
      {"edit app setting", "modifies a setting within a specific application."},
      {"fill form", "completes a form with the necessary information."},
      {"text editing",
       "makes changes to text, such as editing, formatting, or restructuring."},
      {"cross app interaction",
       "involves interacting with multiple applications to complete a task."},
      {"complex ui interaction",
       "involves interacting with complex UI elements like timers and date time picker wheels."},
      {"composition",
       "involves executing a task that requires completing multiple sub-tasks of different task "
       "categories to complete a longer horizon task. For example, tasks that require adding a "
       "new contact and deleting one involves executing both create and delete operation."}};

  static const std::vector<CategoryDef> desktop = {
      {"create", "creates a new entity in the application."},
      {"edit", "modifies an existing entity in the application."},
      {"delete", "deletes an entity from the application."},
      {"filter",
       "filters search results or data to operate on based on the given criteria. You can "
       "optionally compose multiple filters to form a single filter. A filter can be direct, or "
       "it needs to be inferred using multi hop reasoning."},
      {"repeat operation",
       "repeatedly applies a certain create/edit/delete/search operation multiple times to "
       "execute a task. For example, deleting multiple events in calendar or all events on a "
       "single day."},
      {"information retrieval",
       "retrieves information from the app. This can involve answering questions about certain "
       "setting or data from an app"},
      {"multi hop reasoning",
       "involves reasoning across multiple steps or pieces of information to arrive at a "
       "conclusion. For example, answering a question that requires searching for data using "
       "multi hop reasoning."},
      {"file management", "involves managing files and folders on the computer."},
      {"coding", "involves writing code to accomplish a specific task or solve a problem."},
      {"web search", "searches for information on the web using a search engine."},
      {"device search", "searches for information on the computer file system."},
      {"cross app tasks",
       "involves interacting with desktop multiple applications to complete a task."},
      {"edit app setting", "modifies a setting within a specific application."},
      {"edit system settings", "modifies a setting at the system level on the computer."},
      {"composition",
       "involves executing a task that requires completing multiple sub tasks of different task "
       "categories to complete a longer horizon task. For example, tasks that require adding a "
       "new contact and deleting one involves executing both create and delete operation."},
      {"content editing",
       "tasks that require editing content such as text, images, videos, or audio."},
      {"spreadsheet editing",
       "tasks that require editing or manipulating data in a spreadsheet application."},
      {"document editing",
       "tasks that require editing or formatting documents, such as word processing files or "
       "PDFs."},
      {"bash scripting",
       "tasks that require writing or executing bash scripts or commands using the terminal or "
       "code editors."}};

  return p == Platform::mobile ? mobile : desktop;
}

std::string taxonomy_text(Platform p) {
  std::string out;
  for (const auto& c : taxonomy(p)) out += "- " + c.id + ": " + c.description + "\n";
  return out;
}

json taxonomy_json(Platform p) {
  json arr = json::array();
  for (const auto& c : taxonomy(p))
    arr.push_back(json{{"id", c.id}, {"description", c.description}});
  return arr;
}

// ---------------------------------------------------------------------------
// Built-in app descriptions (no-exploration generator input)
// ---------------------------------------------------------------------------

const std::map<std::string, std::string>& builtin_app_descriptions() {
  static const std::map<std::string, std::string> descs = {
      {"calendar",
       R"D(### Calendar app

The Calendar app keeps a flat list of events for personal scheduling.

"Event List: The home screen lists stored events with their titles. Tapping an event opens a detail view with its title, date, start time, and duration.",
"Event Creation: Users can create a new event with a title, date, start time, and duration through a form with Save and Cancel.",
"Event Editing: From the detail view users can edit any field of an existing event.",
"Event Deletion: Events can be deleted from the detail view or by long-pressing the event in the list.",
"Search: A search screen finds events whose fields contain a query string.")D"},
      {"notes",
       R"D(### Notes app

The Notes app stores short text notes organized into folders.

"Note List: The home screen lists stored notes by title. Tapping a note opens a detail view with its title, content, and folder.",
"Note Creation: Users can create a new note with a title, content, and folder through a form with Save and Cancel.",
"Note Editing: From the detail view users can edit the title, content, or folder of an existing note.",
"Note Deletion: Notes can be deleted from the detail view or by long-pressing the note in the list.",
"Search: A search screen finds notes whose fields contain a query string.")D"},
      {"expenses",
       R"D(### Expenses app

The Expenses app tracks spending entries.

"Expense List: The home screen lists stored expenses by name. Tapping an expense opens a detail view with its name, amount, category, and note.",
"Expense Creation: Users can record a new expense with a name, amount, category, and note through a form with Save and Cancel.",
"Expense Editing: From the detail view users can edit any field of an existing expense.",
"Expense Deletion: Expenses can be deleted from the detail view or by long-pressing the entry in the list.",
"Search: A search screen finds expenses whose fields contain a query string.")D"},
      {"clock",
       R"D(### Clock app

The Clock app manages alarms, timers, and world clocks.

"Alarms: Users can create alarms with a label and a time, edit them, and delete them.",
"Timers: Users can create named countdown timers with a duration, edit them, and delete them.",
"World Clocks: Users can add a world clock for a city and remove it.",
"Item List: The home screen lists alarms, timers, and world clocks together. Tapping an item opens a detail view; long-pressing offers deletion.",
"Search: A search screen finds items whose fields contain a query string.")D"}};
  return descs;
}

}  // namespace taskforge::prompts
