"""Tool catalog: the fixed set of actions the experiment agent may take.

Each ToolSpec renders into a usage block with the Action / Action Input /
Observation skeleton the agent is prompted with. The registry preserves
insertion order, so identical registries render byte-identical catalogs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import DuplicateTool


@dataclass
class FieldSpec:
    field: str
    description: str
    required: bool = True


@dataclass
class ToolSpec:
    name: str
    description: str
    input_schema: list[FieldSpec] = field(default_factory=list)
    observation_note: str = "The observation will be the result of the action."

    @property
    def usage_block(self) -> str:
        lines = [f"- {self.name}:", f"        {self.description}", "        Usage:", "        ```"]
        lines.append(f"        Action: {self.name}")
        if self.input_schema:
            lines.append("        Action Input: {")
            for i, spec in enumerate(self.input_schema):
                comma = "," if i + 1 < len(self.input_schema) else ""
                lines.append(f'            "{spec.field}": [{spec.description}]{comma}')
            lines.append("        }")
        else:
            lines.append("        Action Input: {}")
        lines.append(f"        Observation: [{self.observation_note}]")
        lines.append("        ```")
        return "\n".join(lines)


class ToolRegistry:
    """Ordered, name-unique collection of ToolSpecs."""

    def __init__(self, tools: list[ToolSpec] | None = None):
        self._tools: list[ToolSpec] = []
        self._by_name: dict[str, ToolSpec] = {}
        for tool in tools or []:
            self.register(tool)

    def register(self, tool: ToolSpec) -> None:
        if tool.name in self._by_name:
            raise DuplicateTool(f"tool {tool.name!r} registered twice")
        self._tools.append(tool)
        self._by_name[tool.name] = tool

    def get(self, name: str) -> ToolSpec | None:
        return self._by_name.get(name)

    def names(self) -> list[str]:
        return [tool.name for tool in self._tools]

    def __iter__(self):
        return iter(self._tools)

    def __len__(self) -> int:
        return len(self._tools)


def render_tool_catalog(tools) -> str:
    """Render every usage block once, in registry order."""
    seen = set()
    blocks = []
    for tool in tools:
        if tool.name in seen:
            raise DuplicateTool(f"tool {tool.name!r} appears twice in the catalog")
        seen.add(tool.name)
        blocks.append(tool.usage_block)
    if not blocks:
        raise ValueError("cannot render an empty tool catalog")
    return "\n\n".join(blocks)


_PATHY_FILE = "a valid file name with relative path to current directory if needed"
_PATHY_SCRIPT = "a valid python script name with relative path to current directory if needed"


def default_registry() -> ToolRegistry:
    """The full tool set, in catalog order."""
    return ToolRegistry([
        ToolSpec(
            name="List Files",
            description="Use this to navigate the file system.",
            input_schema=[
                FieldSpec("dir_path", 'a valid relative path to a directory, such as "." or "folder1/folder2"'),
            ],
            observation_note=(
                "The observation will be a list of files and folders in dir_path, "
                "or an error message if dir_path is invalid."
            ),
        ),
        ToolSpec(
            name="Copy File",
            description="Use this to copy a file to a new location with a new name.",
            input_schema=[
                FieldSpec("source", _PATHY_FILE),
                FieldSpec("destination", _PATHY_FILE),
            ],
            observation_note=(
                "A success message if the file is copied successfully, "
                "or an error message if the file cannot be copied."
            ),
        ),
        ToolSpec(
            name="Undo Edit Script",
            description="Use this to undo the last edit of the python script.",
            input_schema=[FieldSpec("script_name", _PATHY_SCRIPT)],
            observation_note=(
                "The observation will be the content of the script before the last edit. "
                "If the script does not exist, the observation will be an error message."
            ),
        ),
        ToolSpec(
            name="Execute Script",
            description="Use this to execute the python script. The script must already exist.",
            input_schema=[FieldSpec("script_name", _PATHY_SCRIPT)],
            observation_note="The observation will be output of the script or errors.",
        ),
        ToolSpec(
            name="Request Help",
            description=(
                "Use this to request help from human. Use this only when the provided "
                "tools and files are not enough for accomplishing necessary steps, such "
                "as requesting API reference or installing a library. So you should "
                "check through the provided tools and files first."
            ),
            input_schema=[FieldSpec("request", "a detailed description on what to do")],
            observation_note="The observation will be the response from human.",
        ),
        ToolSpec(
            name="Final Answer",
            description="Use this to provide the final answer to the current task.",
            input_schema=[FieldSpec("final_answer", "a detailed description on the final answer")],
            observation_note="The observation will be empty.",
        ),
        ToolSpec(
            name="Understand File",
            description=(
                "Use this to read the whole file and understand certain aspects. You "
                "should provide detailed description on what to look for and what "
                "should be returned."
            ),
            input_schema=[
                FieldSpec("file_name", _PATHY_FILE),
                FieldSpec("things_to_look_for", "a detailed description on what to look for and what should be returned"),
            ],
            observation_note=(
                "The observation will be a description of relevant content and lines in "
                "the file. If the file does not exist, the observation will be an error message."
            ),
        ),
        ToolSpec(
            name="Inspect Script Lines",
            description=(
                "Use this to inspect specific part of a python script precisely, or the "
                "full content of a short script. The number of lines to display is "
                "limited to 100 lines."
            ),
            input_schema=[
                FieldSpec("script_name", _PATHY_SCRIPT),
                FieldSpec("start_line_number", "a valid line number"),
                FieldSpec("end_line_number", "a valid line number"),
            ],
            observation_note=(
                "The observation will be the content of the script between "
                "start_line_number and end_line_number. If the script does not exist, "
                "the observation will be an error message."
            ),
        ),
        ToolSpec(
            name="Edit Script (AI)",
            description=(
                "Use this to do a relatively large but cohesive edit over a python "
                "script. Instead of editing the script directly, you should describe "
                "the edit instruction so that another AI can help you do this."
            ),
            input_schema=[
                FieldSpec("script_name", _PATHY_SCRIPT + ". An empty script will be created if it does not exist"),
                FieldSpec("edit_instruction", "a detailed step by step description on how to edit it"),
                FieldSpec("save_name", _PATHY_FILE),
            ],
            observation_note=(
                "The observation will be the edited content of the script. You should "
                "always double check whether the edit is correct. If it is far from "
                "correct, you can use the Undo Edit Script action to undo the edit."
            ),
        ),
        ToolSpec(
            name="Reflection",
            description=(
                "Use this to look over all the past steps and reflect. You should "
                "provide detailed description on what to reflect on and what should "
                "be returned."
            ),
            input_schema=[
                FieldSpec("things_to_reflect_on", "a detailed description on what to reflect on and what should be returned"),
            ],
            observation_note="The observation will be the reflection.",
        ),
        ToolSpec(
            name="Retrieve Dataset",
            description=(
                "Retrieve a suitable dataset based on a detailed description of the "
                "requirements. You can load the dataset later from save_dir."
            ),
            input_schema=[
                FieldSpec("instruction", "a detailed description of the dataset requirements"),
                FieldSpec("save_dir", "directory to save the retrieved dataset to. We recommend saving to data/retrieved/"),
            ],
            observation_note=(
                "The observation will be a success message if the dataset was retrieved "
                "successfully. Otherwise, an error message will be returned."
            ),
        ),
        ToolSpec(
            name="Retrieve Model",
            description="Retrieve a suitable model based on a detailed description of the requirements.",
            input_schema=[FieldSpec("instruction", "a detailed description of the model requirements")],
            observation_note=(
                "The observation will be a list of suitable models. You can choose one "
                "of them based on the requirements."
            ),
        ),
        ToolSpec(
            name="Process Dataset",
            description=(
                "Process dataset based on a detailed description of the requirements. "
                "The input text will be in the model_input column and the output text "
                "will be in the model_output column."
            ),
            input_schema=[
                FieldSpec("instruction", "an instruction on how to generate the output from the input"),
                FieldSpec("load_dirs", "directories to load the dataset dicts from, separated by colons"),
                FieldSpec("save_dirs", "directories to save the processed dataset dicts to, separated by colons. The order should match the order of the loaded datasets"),
            ],
            observation_note=(
                "The observation will be a success message if the data was processed "
                "successfully. Otherwise, an error message will be returned."
            ),
        ),
        ToolSpec(
            name="Train Model",
            description="Train the task's model using the processed datasets and given hyperparameters.",
            input_schema=[
                FieldSpec("model_name", "name of the model to train"),
                FieldSpec("load_dirs", "directories to load the dataset dicts from, separated by colons"),
                FieldSpec("result_dir", "directory to save the trained model to. We recommend using results/{trial_id}/"),
                FieldSpec("epochs", "number of epochs to train the model for"),
                FieldSpec("batch_size", "batch size for training the model"),
                FieldSpec("warmup_steps", "number of warmup steps for the optimizer"),
                FieldSpec("weight_decay", "weight decay for the optimizer"),
                FieldSpec("learning_rate", "learning rate for the optimizer"),
            ],
            observation_note=(
                "The observation will be a success message if the model was trained "
                "successfully. Otherwise, an error message will be returned."
            ),
        ),
        ToolSpec(
            name="Execute Model on Test Set",
            description="Execute a trained model on the test sets of specified dataset dicts.",
            input_schema=[
                FieldSpec("result_dir", "directory where the trained model is saved"),
                FieldSpec("load_dirs", "directories to load the dataset dicts from, separated by colons"),
                FieldSpec("save_path", "file to save the results of the model execution in json format"),
                FieldSpec("batch_size", "batch size for executing the model"),
                FieldSpec("input_column", "column name of the input text"),
            ],
            observation_note=(
                "The observation will be a success message if the model was executed "
                "successfully. Otherwise, an error message will be returned."
            ),
        ),
        ToolSpec(
            name="Evaluate Model",
            description="Evaluate a trained model on the test sets of specified dataset dicts.",
            input_schema=[
                FieldSpec("load_dirs", "directories to load the dataset dicts from, separated by colons"),
                FieldSpec("save_path", "file to load the results of the model execution in json format"),
                FieldSpec("output_column", "column name of the output text"),
            ],
            observation_note="The values for various evaluation metrics will be returned.",
        ),
    ])
