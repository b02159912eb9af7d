"""Plain-text scenario dump.

Format (one record per line, comma separated, floats in ``repr`` form so a
dump reads back bit-exact)::

    # lmb-scenario-dump v1
    N,<duration>
    S,<sensor_id>,<px>,<py>,<bearing_std>,<range_std>,<detect_prob>,<clutter_rate>,<range_max>
    T,<step>,<target_id>,<birth_step>,<px>,<vx>,<py>,<vy>
    Z,<step>,<sensor_id>,<bearing>,<range>

Records are ordered by step; measurement rows keep their order within a scan.
"""

import csv
import io
import logging
from collections import defaultdict
from pathlib import Path

import numpy as np

from src.models.sensor import BearingRangeSensor
from src.sim.scenario import ScenarioData, TruthTrajectory
from src.utils.file_handler import read_text_file, write_text_file

logger = logging.getLogger(__name__)

DUMP_HEADER = "# lmb-scenario-dump v1"


def _f(value: float) -> str:
    return repr(float(value))


def format_dump(data: ScenarioData) -> str:
    buffer = io.StringIO()
    buffer.write(DUMP_HEADER + "\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["N", data.duration])
    for s in data.sensors:
        writer.writerow(
            [
                "S", s.id, _f(s.position[0]), _f(s.position[1]), _f(s.bearing_std),
                _f(s.range_std), _f(s.detect_prob), _f(s.clutter_rate), _f(s.range_max),
            ]
        )
    for step in range(data.duration):
        for trajectory in data.truth:
            state = trajectory.state_at(step)
            if state is not None:
                writer.writerow(
                    ["T", step, trajectory.id, trajectory.birth_step, *map(_f, state)]
                )
        for sensor, scan in zip(data.sensors, data.measurements[step], strict=True):
            for bearing, rng in scan:
                writer.writerow(["Z", step, sensor.id, _f(bearing), _f(rng)])
    return buffer.getvalue()


def write_dump(data: ScenarioData, path: Path) -> Path:
    """Write the scenario dump to ``path``."""
    path = write_text_file(Path(path), format_dump(data))
    logger.info(f"Scenario dump written: {path}")
    return path


def parse_dump(text: str) -> ScenarioData:
    """Rebuild a scenario from dump text.

    Raises:
        ValueError: On a missing header or an unknown record type
    """
    lines = text.splitlines()
    if not lines or lines[0] != DUMP_HEADER:
        raise ValueError("Not a scenario dump: missing header")

    duration = 0
    sensors: list[BearingRangeSensor] = []
    truth_rows: dict[int, list[tuple[int, list[float]]]] = defaultdict(list)
    births: dict[int, int] = {}
    scans: dict[tuple[int, int], list[tuple[float, float]]] = defaultdict(list)

    for row in csv.reader(lines[1:]):
        if not row:
            continue
        kind = row[0]
        if kind == "N":
            duration = int(row[1])
        elif kind == "S":
            values = [float(v) for v in row[2:]]
            sensors.append(
                BearingRangeSensor(
                    id=int(row[1]),
                    position=(values[0], values[1]),
                    bearing_std=values[2],
                    range_std=values[3],
                    detect_prob=values[4],
                    clutter_rate=values[5],
                    range_max=values[6],
                )
            )
        elif kind == "T":
            target_id = int(row[2])
            births[target_id] = int(row[3])
            truth_rows[target_id].append((int(row[1]), [float(v) for v in row[4:8]]))
        elif kind == "Z":
            scans[(int(row[1]), int(row[2]))].append((float(row[3]), float(row[4])))
        else:
            raise ValueError(f"Unknown dump record type: {kind!r}")

    truth = [
        TruthTrajectory(
            target_id,
            births[target_id],
            np.array([state for _, state in sorted(rows)], dtype=float),
        )
        for target_id, rows in sorted(truth_rows.items())
    ]
    measurements = [
        [np.array(scans.get((step, s.id), []), dtype=float).reshape(-1, 2) for s in sensors]
        for step in range(duration)
    ]
    return ScenarioData(sensors=sensors, truth=truth, measurements=measurements)


def read_dump(path: Path) -> ScenarioData:
    return parse_dump(read_text_file(Path(path)))
