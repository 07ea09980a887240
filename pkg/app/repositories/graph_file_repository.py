import json
import os
from typing import Dict, List, Optional

from pydantic import BaseModel

from app.core.config import settings
from app.graphs.colored_graph import ColoredGraph
from app.graphs.graph_io import parse_graph, parse_sequence, render_graph, render_sequence
from app.graphs.trigraph import ContractionSequence

GRAPH_SUFFIX = ".graph"
SEQUENCE_SUFFIX = ".seq"
PARAMS_FILE = "params.json"


class GraphFileRepository:
    def __init__(self, base_dir: Optional[str] = None):
        """
        Constructor for GraphFileRepository

        Args:
            base_dir (Optional[str]): Root directory for all files, defaults to settings.OUTPUT_DIR
        """
        self.base_dir = base_dir or settings.OUTPUT_DIR
        os.makedirs(self.base_dir, exist_ok=True)

    def get_file_path(self, name: str) -> str:
        """
        Get the full path to a file

        Args:
            name (str): Path relative to the base directory

        Returns:
            str: The full file path
        """
        return os.path.join(self.base_dir, name)

    def _write(self, name: str, text: str) -> str:
        path = self.get_file_path(name)
        os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)
        return path

    def _read(self, name: str) -> str:
        with open(self.get_file_path(name), "r", encoding="utf-8") as handle:
            return handle.read()

    def save_graph(self, name: str, g: ColoredGraph) -> str:
        """
        Write a graph in the text format

        Args:
            name (str): File stem (the .graph suffix is appended)
            g (ColoredGraph): The graph

        Returns:
            str: The written path
        """
        return self._write(name + GRAPH_SUFFIX, render_graph(g))

    def load_graph(self, name: str) -> ColoredGraph:
        """
        Read a graph written by save_graph

        Raises:
            GraphParseError: If the file is malformed
        """
        return parse_graph(self._read(name + GRAPH_SUFFIX))

    def save_sequence(self, name: str, s: ContractionSequence) -> str:
        return self._write(name + SEQUENCE_SUFFIX, render_sequence(s))

    def load_sequence(self, name: str) -> ContractionSequence:
        return parse_sequence(self._read(name + SEQUENCE_SUFFIX))

    def save_report(self, name: str, report: BaseModel) -> str:
        """
        Write a pydantic report as indented JSON

        Returns:
            str: The written path
        """
        return self._write(name + ".json", report.model_dump_json(indent=2))

    def save_bundle(self, name: str, graphs: Dict[str, ColoredGraph], params: Dict) -> str:
        """
        Write a counterexample bundle: one .graph file per entry plus params.json

        Args:
            name (str): Bundle directory name
            graphs (Dict[str, ColoredGraph]): File stem -> graph
            params (Dict): JSON-serialisable parameters reproducing the case

        Returns:
            str: The bundle directory
        """
        for stem, g in graphs.items():
            self.save_graph(os.path.join(name, stem), g)
        self._write(os.path.join(name, PARAMS_FILE), json.dumps(params, indent=2, sort_keys=True))
        return self.get_file_path(name)

    def load_bundle(self, name: str) -> Dict[str, object]:
        """
        Read a bundle written by save_bundle

        Returns:
            Dict[str, object]: {"graphs": {stem: ColoredGraph}, "params": dict}
        """
        directory = self.get_file_path(name)
        graphs = {
            entry[: -len(GRAPH_SUFFIX)]: self.load_graph(os.path.join(name, entry[: -len(GRAPH_SUFFIX)]))
            for entry in sorted(os.listdir(directory))
            if entry.endswith(GRAPH_SUFFIX)
        }
        params = json.loads(self._read(os.path.join(name, PARAMS_FILE)))
        return {"graphs": graphs, "params": params}

    def list_bundles(self) -> List[str]:
        """
        List bundle directories under the base directory

        Returns:
            List[str]: Bundle names
        """
        if not os.path.exists(self.base_dir):
            return []
        return sorted(
            entry
            for entry in os.listdir(self.base_dir)
            if os.path.isfile(os.path.join(self.base_dir, entry, PARAMS_FILE))
        )
