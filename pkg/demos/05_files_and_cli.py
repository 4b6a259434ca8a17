"""
Round trip through files and the command line
=============================================

Layers go out as a tab-separated edge list, come back through
``dcmase fit`` and ``dcmase estimate``, and the labels match the
library call made with the same seed.
"""

import json
import tempfile
from pathlib import Path

import numpy as np

from dcmase import ari, dcmase
from dcmase.cli import main
from dcmase.clustering import KMeansConfig
from dcmase.io import read_labels_csv, write_edge_list, write_labels_csv
from dcmase.simulation import Scenario, generate_scenario_model

model = generate_scenario_model(Scenario(n=60, target_degree=15), 3, 0)
layers = model.sample(seed=2)

with tempfile.TemporaryDirectory() as tmp:
    tmp = Path(tmp)
    write_edge_list(layers, tmp / "net.tsv")
    print((tmp / "net.tsv").read_text().splitlines()[:4])

    main(["fit", str(tmp / "net.tsv"), "--n", "60", "--k", "3", "--seed", "4",
          "--out", str(tmp)])
    labels = read_labels_csv(tmp / "labels.csv")
    same = dcmase(layers, 3, cluster=KMeansConfig(seed=4)).labels
    print("CLI equals library:", bool(np.array_equal(labels, same)))
    print("ARI vs truth:", round(ari(labels, model.labels), 3))

    write_labels_csv(labels, tmp / "fitted.csv")
    main(["estimate", str(tmp / "net.tsv"), "--n", "60", "--labels", str(tmp / "fitted.csv"),
          "--oos", "--k-grid", "2,3,4", "--out", str(tmp)])
    print(json.loads((tmp / "params.json").read_text())["B"][0])
    print((tmp / "mse.csv").read_text())
