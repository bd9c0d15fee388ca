# Copyright (c) the zipchow authors. All rights reserved.
#
# This source code is licensed under the license found in the
# LICENSE file in the root directory of this source tree.

import copy
import csv
import datetime
import json
import logging
import os
import platform
import time
from typing import Dict, Iterable, Optional

import sympy

CASE_FIELDS = ['invariant', 'case', 'ok', 'detail']


def _now() -> str:
    return datetime.datetime.now().strftime("%Y-%m-%d %H:%M:%S.%f")


def gather_metadata() -> Dict:
    # Git metadata is optional.
    try:
        import git

        try:
            repo = git.Repo(search_parent_directories=True)
            git_data = dict(
                commit=repo.commit().hexsha,
                branch=None if repo.head.is_detached else repo.active_branch.name,
                is_dirty=repo.is_dirty(),
                path=repo.git_dir,
            )
        except (git.InvalidGitRepositoryError, git.NoSuchPathError, ValueError):
            git_data = None
    except ImportError:
        git_data = None
    return dict(
        date_start=_now(),
        date_end=None,
        successful=False,
        git=git_data,
        python=platform.python_version(),
        sympy=sympy.__version__,
        max_d=os.environ.get("ZIPCHOW_MAX_D"),
    )


class FileWriter:
    """Per-run directory with out.log, logs.csv, fields.csv, cases.csv and meta.json."""

    def __init__(self,
                 xpid: Optional[str] = None,
                 xp_args: Optional[dict] = None,
                 rootdir: str = "~/logs/zipchow",
                 symlink_to_latest: bool = True):

        if not xpid:
            xpid = "sweep-{proc}_{unixtime}".format(
                proc=os.getpid(), unixtime=int(time.time())
            )
        self.xpid = xpid
        self._tick = 0

        self.metadata = gather_metadata()
        # Copied so later mutation of the args cannot leak into meta.json.
        self.metadata["args"] = copy.deepcopy(xp_args or {})
        self.metadata["xpid"] = self.xpid

        formatter = logging.Formatter("%(message)s")
        self._logger = logging.getLogger("zipchow/out")
        self._logger.setLevel(logging.INFO)
        self._logger.propagate = False

        rootdir = os.path.expandvars(os.path.expanduser(rootdir))
        self.basepath = os.path.join(rootdir, self.xpid)
        if not os.path.exists(self.basepath):
            os.makedirs(self.basepath, exist_ok=True)

        if symlink_to_latest:
            symlink = os.path.join(rootdir, "latest")
            try:
                if os.path.islink(symlink):
                    os.remove(symlink)
                if not os.path.exists(symlink):
                    os.symlink(self.basepath, symlink)
            except OSError:
                # Another run raced us to the symlink.
                pass

        self.paths = dict(
            msg=os.path.join(self.basepath, "out.log"),
            logs=os.path.join(self.basepath, "logs.csv"),
            fields=os.path.join(self.basepath, "fields.csv"),
            cases=os.path.join(self.basepath, "cases.csv"),
            meta=os.path.join(self.basepath, "meta.json"),
        )

        if os.path.exists(self.paths["meta"]):
            logging.warning("Meta file %s exists; not overriding it", self.paths["meta"])
        else:
            self._save_metadata()

        self._filehandler = logging.FileHandler(self.paths["msg"])
        self._filehandler.setFormatter(formatter)
        self._logger.addHandler(self._filehandler)
        self._logger.info("Run %s started at %s", self.xpid, self.metadata["date_start"])

        self.fieldnames = ["_tick", "_time"]
        if os.path.exists(self.paths["logs"]):
            logging.warning("Log file %s exists; new rows will be appended", self.paths["logs"])
            with open(self.paths["fields"], "r") as csvfile:
                lines = list(csv.reader(csvfile))
                if len(lines) > 0:
                    self.fieldnames = lines[-1]
            with open(self.paths["logs"], "r") as csvfile:
                lines = list(csv.reader(csvfile))
                # Header plus at least one data row.
                if len(lines) > 1:
                    self._tick = int(lines[-1][0]) + 1

        self._fieldfile = open(self.paths["fields"], "a")
        self._fieldwriter = csv.writer(self._fieldfile)
        self._logfile = open(self.paths["logs"], "a")
        self._logwriter = csv.DictWriter(self._logfile, fieldnames=self.fieldnames)

        new_cases = not os.path.exists(self.paths["cases"])
        self._casefile = open(self.paths["cases"], "a")
        self._casewriter = csv.DictWriter(self._casefile, fieldnames=CASE_FIELDS)
        if new_cases:
            self._casewriter.writeheader()
            self._casefile.flush()

    def log(self, to_log: Dict, verbose: bool = False) -> None:
        to_log = dict(to_log)
        to_log["_tick"] = self._tick
        self._tick += 1
        to_log["_time"] = time.time()

        old_len = len(self.fieldnames)
        for k in to_log:
            if k not in self.fieldnames:
                self.fieldnames.append(k)
        if old_len != len(self.fieldnames):
            self._fieldwriter.writerow(self.fieldnames)
            self._fieldfile.flush()
            self._logwriter = csv.DictWriter(self._logfile, fieldnames=self.fieldnames)

        if to_log["_tick"] == 0:
            self._logfile.write("# %s\n" % ",".join(self.fieldnames))

        if verbose:
            self._logger.info(
                "LOG | %s",
                ", ".join(["{}: {}".format(k, to_log[k]) for k in sorted(to_log)]),
            )

        self._logwriter.writerow(to_log)
        self._logfile.flush()

    def log_cases(self, rows: Iterable[Dict]) -> None:
        for row in rows:
            self._casewriter.writerow({k: row.get(k, "") for k in CASE_FIELDS})
        self._casefile.flush()

    def close(self, successful: bool = True) -> None:
        self.metadata["date_end"] = _now()
        self.metadata["successful"] = successful
        self._save_metadata()
        self._logger.info("Run %s finished, successful=%s", self.xpid, successful)

        for f in [self._logfile, self._fieldfile, self._casefile]:
            f.close()
        self._logger.removeHandler(self._filehandler)
        self._filehandler.close()

    def _save_metadata(self) -> None:
        with open(self.paths["meta"], "w") as jsonfile:
            json.dump(self.metadata, jsonfile, indent=4, sort_keys=True, default=str)
