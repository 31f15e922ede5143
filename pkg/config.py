from typing import List
import os
from dotenv import load_dotenv


load_dotenv()

# Logging
LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO").upper()

# Randomness - every sub-seed is derived from this one when --seed is omitted
DEFAULT_SEED = int(os.getenv("DEFAULT_SEED", 2023))

# Spectral Configuration
EIGEN_TOL = float(os.getenv("EIGEN_TOL", 1e-8))
LANCZOS_MAX_ITER = int(os.getenv("LANCZOS_MAX_ITER", 5000))
DENSE_EIGEN_LIMIT = int(os.getenv("DENSE_EIGEN_LIMIT", 512))  # dense solver up to this many rows
KMEANS_RESTARTS = int(os.getenv("KMEANS_RESTARTS", 10))
KMEANS_MAX_ITER = int(os.getenv("KMEANS_MAX_ITER", 300))

# Indexing Configuration
SID_START = int(os.getenv("SID_START", 1001))
RID_RANGE_FACTOR = int(os.getenv("RID_RANGE_FACTOR", 10))  # RID draws from [1, factor * |items|]
CID_N = int(os.getenv("CID_N", 4))
CID_K = int(os.getenv("CID_K", 20))
IID_PREFIX = "IID"
UNKNOWN_CATEGORY = "Unknown"
RESERVED_LABEL_MARK = "#"  # prefixed to category labels that would clash with Unknown or leaf counters
VOCAB_INIT = os.getenv("VOCAB_INIT", "random")

# Verification
VERIFY_BRUTE_FORCE_LIMIT = int(os.getenv("VERIFY_BRUTE_FORCE_LIMIT", 10000))

# Archives
ARCHIVE_INDENT = int(os.getenv("ARCHIVE_INDENT", 0)) or None
CORPUS_FILE = "corpus.json"
SPLIT_FILE = "split.json"
VOCAB_SUFFIX = ".vocab.txt"
TREE_SUFFIX = ".tree.json"

# Supported schemes and their parameters
SCHEMES: List[str] = ["rid", "tid", "iid", "sid", "cid", "semid", "hid"]

USER_ORDERINGS: List[str] = ["TSO", "RO", "S2LO", "L2SO"]

SEMID_MODES: List[str] = ["tree", "non-tree"]

HID_VARIANTS: List[str] = ["sid+iid", "cid+iid", "semid+iid", "semid+cid"]

HID_ORDERS: List[str] = ["semid-first", "cid-first"]

SCHEME_PARAMS = {
    "rid": [],
    "tid": [],
    "iid": [],
    "sid": ["ordering"],
    "cid": ["N", "k"],
    "semid": ["mode"],
    "hid": ["variant", "order", "ordering", "N", "k", "mode"],
}

# Schemes that segment plain-text IDs and therefore need --tokenizer
TOKENIZER_SCHEMES: List[str] = ["rid", "tid", "sid"]

# Recommended average ID length band for CID sweeps
RECOMMENDED_LENGTH_BAND = (3.0, 4.0)


class Messages:
    INGEST_TEXT = """
📥 **Corpus Ingested**

**Users:** {users}
**Items:** {items}
**Interactions:** {interactions}
**Sparsity:** {sparsity:.4f}%
**Span:** {first} → {last} ({span})
**Archive:** `{path}`
"""

    SPLIT_TEXT = """
✂️ **Leave-One-Out Split**

**Users with targets:** {evaluated}
**Train-only users:** {train_only}
**Train interactions:** {train_interactions}
**Archive:** `{path}`
"""

    INDEX_TEXT = """
🏷 **Items Indexed**

**Scheme:** {scheme}
**Items:** {items}
**Average length:** {avg_len:.2f}
**Extra tokens:** {extra_tokens}
**Took:** {elapsed}
**Map:** `{path}`
"""

    VERIFY_OK_TEXT = "✅ All {items} IDs are unique (prefix-free: {prefix_free})"

    VERIFY_FAIL_TEXT = "❌ {collisions} collision(s) found among {items} IDs"

    USAGE_ERROR_TEXT = "⚠️ **Usage error:** {reason}"

    CONSTRAINT_ERROR_TEXT = "⛔ **Constraint violated:** {reason}"

    FAILURE_TEXT = "❌ **{kind}:** {reason}"

    END_OF_ID_TEXT = "<end-of-id>"
