"""Extract the 193-dimensional acoustic feature vector from a clip.

The vector concatenates five blocks computed from one shared
spectrogram: 40 MFCCs, 128 mel band energies, 12 chroma bins,
7 spectral contrast bands and 6 tonal centroid coordinates.
"""

import numpy as np

from coughrank.audio import AudioClip, extract_features, DEFAULT_SAMPLE_RATE

# a burst of noise with a decaying envelope, roughly cough-shaped
rng = np.random.default_rng(0)
n = int(0.4 * DEFAULT_SAMPLE_RATE)
envelope = np.exp(-np.arange(n) / (0.08 * DEFAULT_SAMPLE_RATE))
samples = 0.6 * envelope * rng.uniform(-1, 1, n)
clip = AudioClip(samples, DEFAULT_SAMPLE_RATE)

fv = extract_features(clip)
vec = fv.concat()
print(f"clip: {clip.samples.size} samples at {clip.sample_rate} Hz")
print(f"feature vector length: {vec.size}")
print(f"  mfcc     {fv.mfcc.shape}  first 4: {np.round(fv.mfcc[:4], 3)}")
print(f"  mel      {fv.mel.shape}  peak band: {int(np.argmax(fv.mel))}")
print(f"  chroma   {fv.chroma.shape}  values in [{fv.chroma.min():.3f}, {fv.chroma.max():.3f}]")
print(f"  contrast {fv.contrast.shape}  {np.round(fv.contrast, 3)}")
print(f"  tonnetz  {fv.tonnetz.shape}  {np.round(fv.tonnetz, 3)}")

# the same vector is invariant to playback gain except for MFCC 0
loud = AudioClip(10.0 * samples, DEFAULT_SAMPLE_RATE)
fv_loud = extract_features(loud)
print("\nafter a 20 dB gain:")
print(f"  mfcc[0] moved by {fv_loud.mfcc[0] - fv.mfcc[0]:.4f}")
print(f"  max change in mfcc[1:]: {np.abs(fv_loud.mfcc[1:] - fv.mfcc[1:]).max():.2e}")
print(f"  max change in chroma:   {np.abs(fv_loud.chroma - fv.chroma).max():.2e}")
