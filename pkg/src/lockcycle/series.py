"""Dated daily series: JHU CSSE ingestion, differencing, windows, smoothing, I/O.

Cumulative inputs are kept exactly as published.  Reporting artifacts such as
negative daily increments or downward revisions of a cumulative series are
surfaced through ingest_report, never repaired.
"""

from __future__ import annotations

import csv
import datetime as dt
import json
import os
from dataclasses import dataclass

import numpy as np

__all__ = [
    "KINDS",
    "CUMULATIVE_KINDS",
    "DailySeries",
    "IngestReport",
    "parse_jhu_timeseries",
    "ingest_report",
    "difference",
    "active_cases",
    "window",
    "moving_average",
    "series_to_rows",
    "write_long_csv",
    "read_long_csv",
    "write_long_json",
    "read_long_json",
    "fetch_jhu",
]

KINDS = (
    "confirmed_cumulative",
    "deaths_cumulative",
    "recovered_cumulative",
    "new_cases",
    "daily_deaths",
    "active_cases",
)

CUMULATIVE_KINDS = KINDS[:3]

# Daily counterparts produced by difference().
_DAILY_KIND_FOR = {
    "confirmed_cumulative": "new_cases",
    "deaths_cumulative": "daily_deaths",
}

_JHU_HEADER = ["Province/State", "Country/Region", "Lat", "Long"]

_JHU_BASE = ("https://raw.githubusercontent.com/CSSEGISandData/COVID-19/master/"
             "csse_covid_19_data/csse_covid_19_time_series/")

JHU_FILENAMES = {
    "confirmed_cumulative": "time_series_covid19_confirmed_global.csv",
    "deaths_cumulative": "time_series_covid19_deaths_global.csv",
    "recovered_cumulative": "time_series_covid19_recovered_global.csv",
}


@dataclass(frozen=True)
class DailySeries:
    """A contiguous daily-sampled series starting at start_date.

    kind is one of KINDS.  clipped is set by window() when the requested
    range ran past the available data.  Values are frozen after construction.
    """

    start_date: dt.date
    values: np.ndarray
    kind: str
    clipped: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError("unknown series kind %r; expected one of %s" % (self.kind, ", ".join(KINDS)))
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1:
            raise ValueError("values must be one-dimensional")
        values = values.copy()
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    def __len__(self):
        return len(self.values)

    @property
    def end_date(self) -> dt.date:
        if len(self.values) == 0:
            raise ValueError("empty series has no end date")
        return self.start_date + dt.timedelta(days=len(self.values) - 1)

    def dates(self):
        return [self.start_date + dt.timedelta(days=i) for i in range(len(self.values))]

    def index_of(self, day: dt.date) -> int:
        i = (day - self.start_date).days
        if not 0 <= i < len(self.values):
            raise ValueError("date %s outside series range %s..%s" % (day, self.start_date, self.end_date))
        return i

    def value_on(self, day: dt.date) -> float:
        return float(self.values[self.index_of(day)])


@dataclass(frozen=True)
class IngestReport:
    """Reporting artifacts found in a series: dates with a negative increment
    (cumulative kinds) or a negative value (daily kinds)."""

    kind: str
    violations: tuple

    @property
    def count(self) -> int:
        return len(self.violations)


def _parse_mdy(token: str, path: str, column: int) -> dt.date:
    parts = token.strip().split("/")
    if len(parts) != 3:
        raise ValueError("%s: bad date column %d: %r (expected m/d/yy)" % (path, column, token))
    try:
        m, d, y = int(parts[0]), int(parts[1]), int(parts[2])
    except ValueError:
        raise ValueError("%s: bad date column %d: %r (expected m/d/yy)" % (path, column, token))
    if y < 100:
        y += 2000
    return dt.date(y, m, d)


def parse_jhu_timeseries(path, country: str, kind: str = "confirmed_cumulative",
                         province: str | None = None) -> DailySeries:
    """Read one country's cumulative series from a JHU CSSE wide-format file.

    Rows whose Country/Region equals country are summed over provinces unless
    a single province is requested.  The date header must be a contiguous
    daily run in m/d/yy form.

    Args:
        path: csv file in the CSSE global time-series layout.
        country: exact Country/Region value, e.g. "Israel" or "Korea, South".
        kind: cumulative kind to stamp on the result.
        province: optional exact Province/State value to select one row.

    Returns:
        DailySeries of the summed cumulative counts.
    """
    if kind not in CUMULATIVE_KINDS:
        raise ValueError("kind must be cumulative, got %r" % kind)
    with open(path, newline="", encoding="utf-8-sig") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ValueError("%s: empty file" % path)
    header = rows[0]
    if header[:4] != _JHU_HEADER:
        raise ValueError("%s: unexpected header %r; not a CSSE wide-format file" % (path, header[:4]))
    if len(header) == 4:
        raise ValueError("%s: no date columns" % path)
    dates = [_parse_mdy(tok, str(path), i + 5) for i, tok in enumerate(header[4:])]
    for prev, cur in zip(dates, dates[1:]):
        if (cur - prev).days != 1:
            raise ValueError("%s: date columns must be consecutive days; gap between %s and %s"
                             % (path, prev, cur))

    width = len(header)
    total = np.zeros(len(dates))
    matched = 0
    seen = set()
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != width:
            raise ValueError("%s: line %d has %d fields, expected %d" % (path, lineno, len(row), width))
        seen.add(row[1])
        if row[1] != country:
            continue
        if province is not None and row[0] != province:
            continue
        total += np.array([float(x) if x.strip() else 0.0 for x in row[4:]])
        matched += 1
    if matched == 0:
        raise ValueError("country %r%s not found in %s; available countries: %s"
                         % (country,
                            "" if province is None else " (province %r)" % province,
                            path, ", ".join(sorted(seen))))
    return DailySeries(dates[0], total, kind)


def ingest_report(series: DailySeries) -> IngestReport:
    """List source anomalies without changing the data."""
    out = []
    days = series.dates()
    if series.kind in CUMULATIVE_KINDS:
        deltas = np.diff(series.values)
        for i in np.nonzero(deltas < 0)[0]:
            out.append((days[i + 1], float(deltas[i])))
    else:
        for i in np.nonzero(series.values < 0)[0]:
            out.append((days[i], float(series.values[i])))
    return IngestReport(series.kind, tuple(out))


def difference(series: DailySeries) -> DailySeries:
    """Daily increments of a cumulative series; the result starts one day later.

    Negative increments (downward source revisions) are preserved.
    """
    if series.kind not in _DAILY_KIND_FOR:
        raise ValueError("no daily kind defined for %r" % series.kind)
    if len(series) < 2:
        raise ValueError("need at least two points to difference")
    return DailySeries(series.start_date + dt.timedelta(days=1),
                       np.diff(series.values), _DAILY_KIND_FOR[series.kind])


def active_cases(confirmed: DailySeries, deaths: DailySeries,
                 recovered: DailySeries) -> DailySeries:
    """confirmed - deaths - recovered on the date range common to all three."""
    for s, k in ((confirmed, "confirmed_cumulative"), (deaths, "deaths_cumulative"),
                 (recovered, "recovered_cumulative")):
        if s.kind != k:
            raise ValueError("expected a %s series, got %s" % (k, s.kind))
        if len(s) == 0:
            raise ValueError("empty %s series" % k)
    start = max(confirmed.start_date, deaths.start_date, recovered.start_date)
    end = min(confirmed.end_date, deaths.end_date, recovered.end_date)
    if end < start:
        raise ValueError("series have no common date range")

    def cut(s):
        i = (start - s.start_date).days
        return s.values[i:i + (end - start).days + 1]

    return DailySeries(start, cut(confirmed) - cut(deaths) - cut(recovered), "active_cases")


def window(series: DailySeries, start: dt.date, end: dt.date) -> DailySeries:
    """Inclusive date window.  Edges outside the data are clipped and flagged."""
    if start > end:
        raise ValueError("window start %s is after end %s" % (start, end))
    if len(series) == 0:
        raise ValueError("cannot window an empty series")
    if end < series.start_date or start > series.end_date:
        raise ValueError("window %s..%s does not intersect series range %s..%s"
                         % (start, end, series.start_date, series.end_date))
    clipped = start < series.start_date or end > series.end_date
    lo = max(start, series.start_date)
    hi = min(end, series.end_date)
    i = (lo - series.start_date).days
    j = (hi - series.start_date).days
    return DailySeries(lo, series.values[i:j + 1], series.kind, clipped=clipped)


def moving_average(series: DailySeries, window_days: int) -> DailySeries:
    """Trailing moving average; the first window_days - 1 points are dropped."""
    if window_days < 1:
        raise ValueError("window_days must be at least 1")
    if window_days == 1:
        return series
    if len(series) < window_days:
        raise ValueError("series of %d points is shorter than the %d-day window"
                         % (len(series), window_days))
    smoothed = np.convolve(series.values, np.ones(window_days), "valid") / window_days
    return DailySeries(series.start_date + dt.timedelta(days=window_days - 1),
                       smoothed, series.kind)


# ---------------------------------------------------------------------------
# long-format emission and read-back
#
# Rows are (date, kind, value) ordered by date, then by the order in which the
# series were given.  Values are written with repr so floats round-trip.

def series_to_rows(series_list):
    kind_rank = {}
    for s in series_list:
        if s.kind in kind_rank:
            raise ValueError("duplicate kind %r in emission" % s.kind)
        kind_rank[s.kind] = len(kind_rank)
    rows = []
    for s in series_list:
        for day, v in zip(s.dates(), s.values):
            rows.append((day, s.kind, float(v)))
    rows.sort(key=lambda r: (r[0], kind_rank[r[1]]))
    return rows


def _open_out(dest):
    if hasattr(dest, "write"):
        return dest, False
    return open(dest, "w", newline="", encoding="utf-8"), True


def write_long_csv(series_list, dest) -> None:
    fh, owned = _open_out(dest)
    try:
        fh.write("date,kind,value\n")
        for day, kind, v in series_to_rows(series_list):
            fh.write("%s,%s,%r\n" % (day.isoformat(), kind, v))
    finally:
        if owned:
            fh.close()


def write_long_json(series_list, dest) -> None:
    payload = [{"date": day.isoformat(), "kind": kind, "value": v}
               for day, kind, v in series_to_rows(series_list)]
    fh, owned = _open_out(dest)
    try:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
    finally:
        if owned:
            fh.close()


def _series_from_rows(rows):
    by_kind = {}
    for day, kind, value in rows:
        by_kind.setdefault(kind, []).append((day, value))
    out = {}
    for kind, pairs in by_kind.items():
        pairs.sort(key=lambda p: p[0])
        days = [p[0] for p in pairs]
        for prev, cur in zip(days, days[1:]):
            if (cur - prev).days != 1:
                raise ValueError("%s rows are not a contiguous daily run (gap between %s and %s)"
                                 % (kind, prev, cur))
        out[kind] = DailySeries(days[0], [p[1] for p in pairs], kind)
    return out


def read_long_csv(path):
    """Read back a long-format csv as {kind: DailySeries}."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["date", "kind", "value"]:
            raise ValueError("%s: expected header date,kind,value" % path)
        rows = [(dt.date.fromisoformat(r[0]), r[1], float(r[2])) for r in reader]
    return _series_from_rows(rows)


def read_long_json(path):
    """Read back a long-format json array as {kind: DailySeries}."""
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    rows = [(dt.date.fromisoformat(item["date"]), item["kind"], float(item["value"]))
            for item in payload]
    return _series_from_rows(rows)


def fetch_jhu(dest_dir, timeout: float = 60.0):
    """Download the three current global CSSE files into dest_dir.

    Live files are revised retroactively, so results are NOT reproducible;
    analyses and tests run against the pinned snapshot shipped with the
    package.  Returns {kind: path}.
    """
    import requests

    os.makedirs(dest_dir, exist_ok=True)
    out = {}
    for kind, name in JHU_FILENAMES.items():
        resp = requests.get(_JHU_BASE + name, timeout=timeout)
        resp.raise_for_status()
        path = os.path.join(dest_dir, name)
        with open(path, "wb") as fh:
            fh.write(resp.content)
        out[kind] = path
    return out
