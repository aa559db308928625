"""
The MIT License (MIT)

Copyright (c) 2026 PyTxAlloc contributors

See the LICENSE file distributed with this package for the full text.
"""
from .errors import PTAValidationError, PTAInvalidArgument, PTAInconsistencyError
from .pta_logger import PTALogger
from dataclasses import dataclass, field
import pandas as pd
import numpy as np

HOURS_PER_DAY = 24


@dataclass
class PTATimeBlocks:
    """
    Weighted hourly blocks; block t stands for weights[t] source hours
    """
    hours: np.ndarray
    weights: np.ndarray
    source_hours: int
    days: tuple = ()
    labels: np.ndarray = None
    wcss: list = field(default_factory=list)

    def __len__(self):
        return len(self.hours)

    @property
    def total_weight(self):
        return float(np.sum(self.weights))

    def demand(self, case, bus, growth=1.0):
        return growth * case.demand[bus][self.hours]

    def availability(self, case, bus, tech):
        return case.fleet.profile(bus, tech, case.hours)[self.hours]

    def as_frame(self):
        frame = pd.DataFrame({"block": np.arange(len(self.hours)), "source_hour": self.hours,
                              "weight": self.weights})
        frame["day"] = frame["source_hour"] // HOURS_PER_DAY
        return frame[["block", "day", "source_hour", "weight"]]


def full_year_blocks(hours):
    """
    Every source hour as its own block of weight 1
    """
    return PTATimeBlocks(hours=np.arange(hours), weights=np.ones(hours), source_hours=hours)


def net_load(demand, renewable_profiles, renewable_capacity):
    """
    demand minus sum(profile * capacity); profiles and capacities are keyed alike
    """
    demand = np.asarray(demand, dtype=float)
    out = demand.copy()
    for key, profile in renewable_profiles.items():
        profile = np.asarray(profile, dtype=float)
        if profile.shape != demand.shape:
            raise PTAValidationError("profile {0} has {1} hours, demand has {2}".format(
                key, profile.shape[0], demand.shape[0]))
        out -= profile * float(renewable_capacity.get(key, 0.0))
    return out


def case_net_load(case):
    """
    System net load of a case: total demand less existing renewable output
    """
    total = np.zeros(case.hours)
    for series in case.demand.values():
        total += series
    profiles, capacity = {}, {}
    for (bus, tech), mw in case.fleet.existing.items():
        if tech in case.renewable:
            profiles[(bus, tech)] = case.fleet.profile(bus, tech, case.hours)
            capacity[(bus, tech)] = mw
    return net_load(total, profiles, capacity)


def _kmeans_plus_plus(x, k, rng):
    centers = [int(rng.integers(len(x)))]
    for _ in range(1, k):
        d2 = np.min(((x[:, None, :] - x[centers][None, :, :]) ** 2).sum(axis=2), axis=1)
        total = d2.sum()
        if total <= 0.0:
            remaining = [i for i in range(len(x)) if i not in centers]
            centers.append(remaining[0])
        else:
            centers.append(int(rng.choice(len(x), p=d2 / total)))
    return x[centers].copy()


def _assign(x, centroids):
    d2 = ((x[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
    labels = np.argmin(d2, axis=1)
    return labels, float(d2[np.arange(len(x)), labels].sum()), d2


def cluster_days(series, k, seed, max_iter=300):
    """
    K-means over standardized 24-hour day vectors; medoid days become the representative blocks

    Each representative day is expanded into its 24 hourly blocks, every one weighted by the
    number of days in its cluster. Summed over a day this equals one day block of weight
    24 times the cluster size, so block weights total the hours of the series.
    """
    logger = PTALogger.init_logger(__name__)
    series = np.asarray(series, dtype=float)
    if len(series) == 0 or len(series) % HOURS_PER_DAY:
        raise PTAValidationError("series length {0} is not a positive multiple of 24".format(len(series)))
    days = len(series) // HOURS_PER_DAY
    if not (1 <= k <= days):
        raise PTAInvalidArgument("k must lie in [1, {0}], got {1}".format(days, k))
    x = series.reshape(days, HOURS_PER_DAY)
    std = x.std(axis=0)
    std[std == 0.0] = 1.0
    x = (x - x.mean(axis=0)) / std
    history = []
    if k == days:
        labels = np.arange(days)
        centroids = x.copy()
        history.append(0.0)
    else:
        rng = np.random.default_rng(seed)
        centroids = _kmeans_plus_plus(x, k, rng)
        labels, wcss, _ = _assign(x, centroids)
        history.append(wcss)
        for _ in range(max_iter):
            for c in range(k):
                members = labels == c
                if members.any():
                    centroids[c] = x[members].mean(axis=0)
                else:
                    _, _, d2 = _assign(x, centroids)
                    centroids[c] = x[int(np.argmax(d2[np.arange(days), labels]))]
            new_labels, wcss, _ = _assign(x, centroids)
            if wcss > history[-1] * (1 + 1e-12) + 1e-12:
                raise PTAInconsistencyError("k-means WCSS increased from {0} to {1}".format(history[-1], wcss))
            history.append(wcss)
            if np.array_equal(new_labels, labels):
                break
            labels = new_labels
    medoids, sizes = [], []
    for c in range(k):
        members = np.flatnonzero(labels == c)
        if members.size == 0:
            continue
        dist = ((x[members] - centroids[c]) ** 2).sum(axis=1)
        medoids.append(int(members[int(np.argmin(dist))]))
        sizes.append(members.size)
    order = np.argsort(medoids, kind="stable")
    hours, weights = [], []
    for i in order:
        hours.extend(medoids[i] * HOURS_PER_DAY + h for h in range(HOURS_PER_DAY))
        weights.extend([float(sizes[i])] * HOURS_PER_DAY)
    blocks = PTATimeBlocks(hours=np.array(hours, dtype=int), weights=np.array(weights),
                           source_hours=len(series), days=tuple(medoids[i] for i in order),
                           labels=labels, wcss=history)
    if abs(blocks.total_weight - len(series)) > 1e-9:
        raise PTAInconsistencyError("block weights sum to {0}, source has {1} hours".format(
            blocks.total_weight, len(series)))
    logger.info("{0} - clustered {1} days into {2} representative days ({3} iterations)".format(
        PTALogger.stamp(), days, len(blocks.days), len(history) - 1))
    return blocks
