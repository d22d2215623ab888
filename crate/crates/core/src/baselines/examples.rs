//! Worked plans embedded in in-context prompts.

use kinder_env::EnvId;

const MOTION: [&str; 2] = [
    "Goal: the robot base center is inside the target region\n(and (in_region robot target))\nThe target lies behind a passage, so the robot navigates there directly.\nPlan:\nMoveTo(target:region)[0.0]",
    "Goal: the robot base center is inside the target region\n(and (in_region robot target))\nThe robot turns slightly while driving into the region.\nPlan:\nMoveTo(target:region)[0.5]",
];

const OBSTRUCTION: [&str; 2] = [
    "Goal: the target block rests on the target surface\n(and (on target_block target_surface))\nThe target surface is clear.\nPlan:\nPick(target_block:block, table:surface)[0.5]\nPlace(target_block:block, target_surface:surface)[0.5]",
    "Goal: the target block rests on the target surface\n(and (on target_block target_surface))\nOne obstruction sits on the target surface and must be moved to the table first.\nPlan:\nPick(obstruction0:block, target_surface:surface)[0.5]\nPlace(obstruction0:block, table:surface)[0.1]\nPick(target_block:block, table:surface)[0.5]\nPlace(target_block:block, target_surface:surface)[0.5]",
];

const RETRIEVAL: [&str; 2] = [
    "Goal: the target block is inside the target region\n(and (inside target_block target_region))\nNothing blocks the target.\nPlan:\nPick(target_block:block)[0.25]\nPlace(target_block:block, target_region:region)[0.5, 0.5]",
    "Goal: the target block is inside the target region\n(and (inside target_block target_region))\nObstruction0 touches the target block, so it is moved aside first.\nPlan:\nDisplace(obstruction0:block, target_block:block)[0.5, 0.3, 0.7]\nPick(target_block:block)[0.75]\nPlace(target_block:block, target_region:region)[0.5, 0.5]",
];

const STORAGE: [&str; 2] = [
    "Goal: every block is inside the shelf\n(and (inside block0 shelf) (hand_empty robot))\nPlan:\nPick(block0:block)[0.25]\nPlace(block0:block, shelf:region)[0.5, 0.5]",
    "Goal: every block is inside the shelf\n(and (inside block0 shelf) (inside block1 shelf) (hand_empty robot))\nThe blocks go side by side.\nPlan:\nPick(block0:block)[0.25]\nPlace(block0:block, shelf:region)[0.2, 0.5]\nPick(block1:block)[0.75]\nPlace(block1:block, shelf:region)[0.8, 0.5]",
];

const HOOK: [&str; 2] = [
    "Goal: the movable button is on top of the target button\n(and (covers movable_button target_button))\nThe movable button is left of the target, so the hook pushes it right.\nPlan:\nPickHook(hook:hook)[0.25]\nPushButtonWithHook(hook:hook, movable_button:button, target_button:button)[0.5]",
    "Goal: the movable button is on top of the target button\n(and (covers movable_button target_button))\nThe movable button is right of the target, so the hook pushes it left.\nPlan:\nPickHook(hook:hook)[0.75]\nPushButtonWithHook(hook:hook, movable_button:button, target_button:button)[0.5]",
];

const STICK: [&str; 2] = [
    "Goal: every button is pressed\n(and (pressed button0))\nButton0 is on the floor within arm reach.\nPlan:\nPressButton(button0:button)[]",
    "Goal: every button is pressed\n(and (pressed button0) (pressed button1))\nButton0 is near; button1 is on the table, so the stick is used for it.\nPlan:\nPressButton(button0:button)[]\nPickStick(stick:stick)[0.9]\nPressWithStick(stick:stick, button1:button)[0.0]",
];

/// The two built-in examples for an env.
pub fn in_context_examples(env: EnvId) -> Vec<String> {
    let ex = match env {
        EnvId::Motion2D => MOTION,
        EnvId::Obstruction2D => OBSTRUCTION,
        EnvId::ClutteredRetrieval2D => RETRIEVAL,
        EnvId::ClutteredStorage2D => STORAGE,
        EnvId::PushPullHook2D => HOOK,
        EnvId::StickButton2D => STICK,
    };
    ex.iter().map(|s| s.to_string()).collect()
}
