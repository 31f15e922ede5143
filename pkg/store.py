import json
import logging
import os
from typing import Dict, Optional

import config
from corpus import Corpus, SplitCorpus, corpus_statistics, leave_one_out_split
from errors import ParseError
from helper_func import epoch_to_iso
from indexing import IndexAssignment, Scheme
from spectral import ClusterTree
from tokenization import TokenRegistry

logger = logging.getLogger(__name__)


def _parse_param(value: str):
    try:
        return int(value)
    except ValueError:
        return value


class ArtifactStore:
    """Reads and writes corpus archives, splits and ID maps."""

    def __init__(self, indent: Optional[int] = None):
        self.indent = config.ARCHIVE_INDENT if indent is None else indent

    def _write_json(self, path: str, data) -> None:
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            json.dump(data, handle, indent=self.indent, ensure_ascii=False)
            handle.write("\n")

    def _read_json(self, path: str):
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)

    @staticmethod
    def vocab_path(map_path: str) -> str:
        return f"{map_path}{config.VOCAB_SUFFIX}"

    @staticmethod
    def tree_path(map_path: str) -> str:
        return f"{map_path}{config.TREE_SUFFIX}"

    def summary(self, corpus: Corpus) -> dict:
        stamps = [ts for seq in corpus.timestamps.values() for ts in seq]
        summary = corpus_statistics(corpus)
        summary["first_interaction"] = epoch_to_iso(min(stamps)) if stamps else None
        summary["last_interaction"] = epoch_to_iso(max(stamps)) if stamps else None
        summary["span_seconds"] = max(stamps) - min(stamps) if stamps else 0
        return summary

    def save_corpus(self, corpus: Corpus, directory: str) -> str:
        path = os.path.join(directory, config.CORPUS_FILE)
        try:
            self._write_json(path, {"summary": self.summary(corpus), **corpus.to_dict()})
            logger.info(f"Corpus archive written: {path}")
            return path
        except OSError as e:
            logger.error(f"Error writing corpus archive: {str(e)}")
            raise

    def load_corpus(self, directory: str) -> Corpus:
        path = os.path.join(directory, config.CORPUS_FILE)
        try:
            return Corpus.from_dict(self._read_json(path))
        except (OSError, json.JSONDecodeError, KeyError) as e:
            logger.error(f"Error reading corpus archive {path}: {str(e)}")
            raise

    def has_split(self, directory: str) -> bool:
        return os.path.exists(os.path.join(directory, config.SPLIT_FILE))

    def save_split(self, split: SplitCorpus, directory: str) -> str:
        path = os.path.join(directory, config.SPLIT_FILE)
        try:
            self._write_json(path, split.to_dict())
            logger.info(f"Split archive written: {path}")
            return path
        except OSError as e:
            logger.error(f"Error writing split archive: {str(e)}")
            raise

    def load_split(self, directory: str) -> SplitCorpus:
        path = os.path.join(directory, config.SPLIT_FILE)
        try:
            return SplitCorpus.from_dict(self._read_json(path))
        except (OSError, json.JSONDecodeError, KeyError) as e:
            logger.error(f"Error reading split archive {path}: {str(e)}")
            raise

    def load_corpus_and_split(self, directory: str):
        """Corpus plus its split; the split is computed on the fly when not archived."""
        corpus = self.load_corpus(directory)
        if self.has_split(directory):
            return corpus, self.load_split(directory)
        logger.info(f"No {config.SPLIT_FILE} in {directory}, splitting on the fly")
        return corpus, leave_one_out_split(corpus)

    def save_tree(self, tree: ClusterTree, path: str) -> str:
        try:
            self._write_json(path, tree.to_dict())
            return path
        except OSError as e:
            logger.error(f"Error writing tree {path}: {str(e)}")
            raise

    def load_tree(self, path: str, registry: Optional[TokenRegistry] = None) -> ClusterTree:
        try:
            return ClusterTree.from_dict(self._read_json(path), registry)
        except (OSError, json.JSONDecodeError, KeyError) as e:
            logger.error(f"Error reading tree {path}: {str(e)}")
            raise

    def save_assignment(self, assignment: IndexAssignment, path: str) -> Dict[str, str]:
        """Map TSV, vocab additions and, for tree-based schemes, the tree sidecar."""
        header = " ".join(
            [f"#scheme={assignment.scheme.value if assignment.scheme else 'unknown'}"]
            + [f"{key}={value}" for key, value in assignment.params.items() if value is not None]
        )
        lines = [header] + [f"{item}\t{assignment.rendered(item)}" for item in assignment.items]
        written = {"map": path, "vocab": self.vocab_path(path)}
        try:
            directory = os.path.dirname(path)
            if directory:
                os.makedirs(directory, exist_ok=True)
            with open(path, "w", encoding="utf-8", newline="\n") as handle:
                handle.write("\n".join(lines) + "\n")
            with open(written["vocab"], "w", encoding="utf-8", newline="\n") as handle:
                handle.write(assignment.registry.export_additions(assignment.extra_labels()))
            if assignment.tree is not None:
                written["tree"] = self.save_tree(assignment.tree, self.tree_path(path))
        except OSError as e:
            logger.error(f"Error writing ID map {path}: {str(e)}")
            raise

        logger.info(f"ID map written: {path} ({len(assignment)} items)")
        return written

    def load_assignment(self, path: str, with_tree: bool = True) -> IndexAssignment:
        registry = TokenRegistry()
        scheme: Optional[Scheme] = None
        params: Dict[str, object] = {}
        ids = {}
        try:
            with open(path, "r", encoding="utf-8") as handle:
                for line_no, line in enumerate(handle, start=1):
                    line = line.rstrip("\r\n")
                    if not line:
                        continue
                    if line_no == 1 and line.startswith("#"):
                        for field in line[1:].split():
                            key, _, value = field.partition("=")
                            if key == "scheme":
                                scheme = Scheme.parse(value) if value != "unknown" else None
                            else:
                                params[key] = _parse_param(value)
                        continue
                    item, tab, rendered = line.partition("\t")
                    if not tab or not item or not rendered.split():
                        raise ParseError(path, line_no, "expected 'item<TAB>tok1 tok2 ...'")
                    if item in ids:
                        raise ParseError(path, line_no, f"item {item!r} listed twice")
                    ids[item] = tuple(registry.parse(token) for token in rendered.split())
        except OSError as e:
            logger.error(f"Error reading ID map {path}: {str(e)}")
            raise

        tree = None
        if with_tree and os.path.exists(self.tree_path(path)):
            tree = self.load_tree(self.tree_path(path), registry)
        return IndexAssignment(scheme, ids, registry, params=params, tree=tree)
