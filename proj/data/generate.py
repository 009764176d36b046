#!/usr/bin/env python3
"""Regenerates the bundled toy repository and the synthetic corpora.

Everything is derived from a fixed seed, so rerunning produces identical files.
Usage: python3 data/generate.py [output_dir]   (default: the directory of this file)
"""
import json
import os
import random
import sys

SEED = 20240611

KINDS = ["code_comment", "commit_message", "issue_section", "pull_request_section"]
CLASSES = ["requirement_debt", "code_design_debt", "documentation_debt", "test_debt",
           "scientific_debt", "non_debt"]
INDICATORS = ["translation_challenge", "assumption", "missing_edge_case",
              "computational_accuracy", "new_scientific_finding"]

# Class-specific vocabulary plus a shared pool; the overlap keeps the task
# from being trivially separable.
VOCAB = {
    "requirement_debt": ["todo", "implement", "support", "missing", "feature", "not", "yet",
                         "unsupported", "later", "needs", "option", "add"],
    "code_design_debt": ["hack", "refactor", "ugly", "workaround", "duplicate", "cleanup",
                         "fixme", "messy", "kludge", "temporary", "rewrite", "coupling"],
    "documentation_debt": ["document", "docs", "docstring", "explain", "undocumented",
                           "comment", "describe", "readme", "unclear", "manual", "doc",
                           "wording"],
    "test_debt": ["test", "tests", "coverage", "untested", "flaky", "assert", "unit",
                  "regression", "mock", "fixture", "ci", "disabled"],
    "scientific_debt": ["approximation", "assume", "assumption", "tolerance", "precision",
                        "accuracy", "simplified", "model", "physics", "equation", "boundary",
                        "outdated", "convergence", "numerical", "edge", "case", "not",
                        "correct", "but", "no", "longer"],
    "non_debt": ["compute", "return", "value", "loop", "initialize", "update", "merge",
                 "bump", "version", "release", "fix", "typo", "rename", "variable", "array",
                 "grid", "solver", "output", "input", "file"],
}
SHARED = ["the", "a", "this", "for", "we", "of", "to", "in", "is", "and", "it", "here",
          "should", "code", "function", "data", "now"]
KIND_FLAVOUR = {
    "code_comment": ["here", "below", "line", "call"],
    "commit_message": ["commit", "merge", "branch", "pr"],
    "issue_section": ["issue", "bug", "report", "user"],
    "pull_request_section": ["review", "pr", "patch", "change"],
}
INDICATOR_WORDS = {
    "translation_challenge": ["simplified", "not", "correct", "but"],
    "assumption": ["assume", "assumption", "approximation"],
    "missing_edge_case": ["does", "not", "work", "for", "edge", "case"],
    "computational_accuracy": ["precision", "tolerance", "accuracy"],
    "new_scientific_finding": ["outdated", "no", "longer"],
}

# Labeled corpus layout: per (class, kind) counts; 600 instances, 72 scientific.
LABELED_COUNTS = {
    "requirement_debt":   [18, 10, 12, 10],
    "code_design_debt":   [40, 20, 18, 22],
    "documentation_debt": [10, 12, 10, 8],
    "test_debt":          [14, 12, 8, 12],
    "scientific_debt":    [30, 12, 18, 12],
    "non_debt":           [100, 75, 60, 57],
}
UNLABELED_PER_KIND = [1200, 800, 500, 500]
UNLABELED_PRIOR = [0.02, 0.05, 0.02, 0.02, 0.03, 0.86]


def fnv1a64(text):
    h = 0xcbf29ce484222325
    for b in text.encode():
        h ^= b
        h = (h * 0x100000001b3) & 0xFFFFFFFFFFFFFFFF
    return "%016x" % h


def sentence(rng, cls, kind, indicator=None):
    n = rng.randint(4, 12)
    words = []
    for _ in range(n):
        r = rng.random()
        if r < 0.45:
            words.append(rng.choice(VOCAB[cls]))
        elif r < 0.55:
            words.append(rng.choice(VOCAB[rng.choice(CLASSES)]))
        elif r < 0.7:
            words.append(rng.choice(KIND_FLAVOUR[kind]))
        else:
            words.append(rng.choice(SHARED))
    if indicator:
        pos = rng.randint(0, len(words))
        words[pos:pos] = INDICATOR_WORDS[indicator]
    if rng.random() < 0.1:
        words.append(rng.choice(["?", "!"]))
    return " ".join(words)


def write_jsonl(path, rows):
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w", newline="\n") as f:
        for r in rows:
            f.write(json.dumps(r, separators=(",", ":")) + "\n")


def write_json(path, doc):
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w", newline="\n") as f:
        json.dump(doc, f, indent=2)
        f.write("\n")


def synthetic(out, rng):
    labeled, seen = [], set()
    origins = ["satdaug", "cpp_satd", "awon", "cass_manual"]
    for cls in CLASSES:
        for ki, kind in enumerate(KINDS):
            for i in range(LABELED_COUNTS[cls][ki]):
                indicator = rng.choice(INDICATORS) if cls == "scientific_debt" else None
                text = sentence(rng, cls, kind, indicator)
                while text in seen:
                    text = sentence(rng, cls, kind, indicator)
                seen.add(text)
                row = {"instance_id": "seed/%s/%s/%03d" % (kind, cls, i), "kind": kind,
                       "text": text, "label": cls}
                if indicator:
                    row["indicator"] = indicator
                row.update({"annotator": rng.choice(["ann_a", "ann_b"]), "round": 0,
                            "origin": "cass_manual" if cls == "scientific_debt" else rng.choice(origins)})
                labeled.append(row)
    rng.shuffle(labeled)
    write_jsonl(os.path.join(out, "synthetic", "labeled.jsonl"), labeled)

    unlabeled = []
    for ki, kind in enumerate(KINDS):
        for i in range(UNLABELED_PER_KIND[ki]):
            cls = rng.choices(CLASSES, weights=UNLABELED_PRIOR)[0]
            text = sentence(rng, cls, kind)
            while text in seen:
                text = sentence(rng, cls, kind)
            seen.add(text)
            iid = "pool/%s/%04d" % (kind, i)
            unlabeled.append({"instance_id": iid, "kind": kind, "text": text,
                              "content_hash": fnv1a64(text), "provenance": iid})
    write_jsonl(os.path.join(out, "synthetic", "unlabeled.jsonl"), unlabeled)

    # Two annotators over three sources with moderate to substantial agreement.
    calibration = []
    for source, n, flip in [("SATDAUG", 60, 0.15), ("CPPSATD", 50, 0.2), ("CASS", 40, 0.12)]:
        a, b = [], []
        for _ in range(n):
            la = rng.choices(CLASSES, weights=[2, 4, 2, 2, 2, 8])[0]
            lb = rng.choice(CLASSES) if rng.random() < flip else la
            a.append(la)
            b.append(lb)
        calibration.append({"source": source, "a": a, "b": b})
    write_json(os.path.join(out, "synthetic", "calibration.json"), calibration)

    # 28 practitioner judgements: 22 agree, 6 unsure.
    survey = []
    judgments = ["agree"] * 22 + ["unsure"] * 6
    rng.shuffle(judgments)
    for i, j in enumerate(judgments):
        survey.append({"snippet_id": "snippet-%02d" % (i % 14), "judgment": j,
                       "usefulness": rng.randint(3, 5) if j == "agree" else rng.randint(1, 3),
                       "respondent": "p%02d" % (i // 2)})
    write_jsonl(os.path.join(out, "synthetic", "survey.jsonl"), survey)


COMMENT_STYLES = {
    "python": ("src/heat/solver.py", "#", None, '"""'),
    "cpp": ("src/kernels/stencil.cpp", "//", ("/*", "*/"), None),
    "fortran": ("src/legacy/flux.f90", "!", None, None),
    "java": ("tools/viewer/Viewer.java", "//", ("/*", "*/"), None),
    "shell": ("scripts/run_case.sh", "#", None, None),
    "cmake": ("CMakeLists.txt", "#", ("#[[", "]]"), None),
    "matlab": ("analysis/plot_error.m", "%", ("%{", "%}"), None),
    "rouge": ("config/case.rg", "--", None, None),
}
CODE_LINES = {
    "python": ["x = compute(grid)", "return value", "for i in range(n):", "    u[i] = 0.5 * (a + b)"],
    "cpp": ["int n = grid.size();", "return value;", "for (int i = 0; i < n; ++i) {", "}"],
    "fortran": ["integer :: i, n", "do i = 1, n", "end do", "flux(i) = 0.5d0 * (a + b)"],
    "java": ["int n = grid.length;", "return value;", "for (int i = 0; i < n; i++) {", "}"],
    "shell": ["set -e", "echo \"running case\"", "./solver --input case.in", "exit 0"],
    "cmake": ["project(heatsolver C CXX Fortran)", "add_library(kernels src/kernels/stencil.cpp)",
              "set(CMAKE_CXX_STANDARD 17)", "enable_testing()"],
    "matlab": ["err = abs(u - exact);", "plot(x, err);", "hold on", "end"],
    "rouge": ["case heat", "steps 100", "dt 0.001", "output field"],
}


def comment_text(rng):
    cls = rng.choices(CLASSES, weights=[2, 4, 1, 2, 3, 10])[0]
    text = sentence(rng, cls, "code_comment")
    return text[0].upper() + text[1:]


def toy_file(rng, lang):
    path, prefix, block, _ = COMMENT_STYLES[lang]
    lines = []
    if lang in ("python", "shell"):
        lines.append("#!/usr/bin/env " + ("python3" if lang == "python" else "bash"))
    if lang in ("python", "cpp", "java"):
        lines.append(prefix + " Copyright (c) 2021 The Heatsolver Developers")
        lines.append(prefix + " Distributed under the BSD 3-Clause License")
        lines.append("")
    for _ in range(6):
        r = rng.random()
        if r < 0.4:
            for _ in range(rng.randint(1, 3)):
                lines.append(prefix + " " + comment_text(rng))
        elif r < 0.6 or block is None:
            lines.append(rng.choice(CODE_LINES[lang]) + "  " + prefix + " " + comment_text(rng))
        else:
            body = [comment_text(rng) for _ in range(rng.randint(1, 3))]
            if block[0] == "/*":
                lines.append("/* " + body[0])
                lines.extend(" * " + b for b in body[1:])
                lines.append(" */")
            else:
                lines.append(block[0])
                lines.extend(body)
                lines.append(block[1])
        lines.extend(rng.sample(CODE_LINES[lang], 2))
    if lang == "python":
        lines.append('s = "not # a comment"')
    if lang == "cpp":
        lines.append('const char* url = "http://example.org"; // ' + comment_text(rng))
        lines.append("// TODO")
        lines.append("// " + comment_text(rng))
    return path, "\n".join(lines) + "\n"


def toy(out, rng):
    root = os.path.join(out, "toy")
    repo = os.path.join(root, "repos", "heatsolver")
    for lang in COMMENT_STYLES:
        for copy in range(3):
            path, text = toy_file(rng, lang)
            if copy:
                stem, ext = os.path.splitext(path)
                path = stem + "_%d" % copy + ext if path != "CMakeLists.txt" else \
                    "cmake/part_%d.cmake" % copy
            full = os.path.join(repo, path)
            os.makedirs(os.path.dirname(full), exist_ok=True)
            with open(full, "w", newline="\n") as f:
                f.write(text)

    commits = []
    for i in range(40):
        cls = rng.choices(CLASSES, weights=[2, 4, 2, 2, 2, 8])[0]
        subject = sentence(rng, cls, "commit_message").capitalize()
        body = sentence(rng, cls, "commit_message") if rng.random() < 0.4 else ""
        msg = subject + ("\n\n" + body if body else "")
        if i == 17:
            msg = ""
        if i == 23:
            msg = "Merge pull request #12 from dev/solver\n\nRefactor the solver loop.\n\nAlso fixes boundary handling."
        if i in (30, 31):
            msg = "Bump version"
        commits.append({"hash": "%040x" % (0xabc000 + i), "author": rng.choice(["alice", "bob", "carol"]),
                        "timestamp": "2023-%02d-%02dT12:00:00Z" % (i % 12 + 1, i % 28 + 1), "message": msg})
    write_jsonl(os.path.join(repo, "commits.jsonl"), commits)

    issues_dir = os.path.join(root, "issues", "heatsolver")
    for n in range(1, 19):
        cls = rng.choices(CLASSES, weights=[2, 3, 2, 2, 3, 6])[0]
        comments = []
        for _ in range(rng.randint(0, 4)):
            author = rng.choice(["alice", "bob", "dave", "dependabot[bot]", "github-actions[bot]"])
            comments.append({"author": author, "body": sentence(rng, cls, "issue_section"),
                             "created_at": "2023-06-%02dT10:00:00Z" % (n % 28 + 1)})
        doc = {"number": n, "title": sentence(rng, cls, "issue_section").capitalize(),
               "body": sentence(rng, cls, "issue_section") if rng.random() < 0.8 else "",
               "comments": comments, "created_at": "2023-05-%02dT09:00:00Z" % (n % 28 + 1),
               "is_pull_request": n % 3 == 0, "author": rng.choice(["alice", "erin", "frank"])}
        if n == 18:
            doc.update({"title": "", "body": "", "comments": []})
        write_json(os.path.join(issues_dir, "%04d.json" % n), doc)

    manifest = {"repositories": [
        {"meta": {"name": "heatsolver", "commit_count": 12000, "contributor_count": 25,
                  "age_days": 1095, "star_count": 50, "days_since_last_commit": 30, "is_public": True},
         "path": "repos/heatsolver", "commit_log": "repos/heatsolver/commits.jsonl",
         "issues": "issues/heatsolver"},
        {"meta": {"name": "tinytool", "commit_count": 800, "contributor_count": 2,
                  "age_days": 200, "star_count": 3, "days_since_last_commit": 400, "is_public": True},
         "path": "repos/heatsolver"},
    ]}
    write_json(os.path.join(root, "manifest.json"), manifest)


def main():
    out = sys.argv[1] if len(sys.argv) > 1 else os.path.dirname(os.path.abspath(__file__))
    rng = random.Random(SEED)
    synthetic(out, rng)
    toy(out, rng)


if __name__ == "__main__":
    main()
