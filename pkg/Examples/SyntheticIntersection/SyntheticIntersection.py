from trajectory_uncertainty.dataset.resampling import resample_scene
from trajectory_uncertainty.dataset.windows import extract_windows
from trajectory_uncertainty.features.feature_table import featureFrame, feature_table
from trajectory_uncertainty.file_export.track_export import write_scene
from trajectory_uncertainty.file_import.track_import import load_scene
from trajectory_uncertainty.synthgen.scene_generator import GeneratorConfig, generate_scene
import matplotlib.pyplot as plt

generatorConfig = GeneratorConfig(seed=3, n_tracks=10)
scene = generate_scene(generatorConfig, scene_id="intersection")

foldername = "synthetic_scene"
write_scene(scene, foldername)
scene = load_scene(foldername)

print(f"{len(scene.tracks)} tracks, {len(scene.map.regions)} map regions")

resampled = resample_scene(scene, rate_hz=2.0)
windows = extract_windows(resampled, t_h_steps=6, t_f_steps=6)
print(f"{len(windows)} prediction windows")

features = featureFrame(feature_table(resampled, windows))
print(features[["window_id", "agent_type", "behavior", "compliance", "CV", "NTP_20", "DTP_20"]].head(10))
print(features.groupby("behavior")["CV"].describe())

(fig, ax) = plt.subplots(1, 1)
for track in resampled.tracks:
    ax.plot(track.positions[:, 0], track.positions[:, 1], linewidth=0.8)
ax.set_aspect("equal")
ax.set_xlabel("x [m]")
ax.set_ylabel("y [m]")
fig.set_size_inches(10, 10)
plt.show()

fig.savefig(f"{foldername}/tracks.svg")
