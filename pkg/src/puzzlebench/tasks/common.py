"""Helpers shared by several task modules: SSIM verdicts, answer badges."""

from __future__ import annotations

from puzzlebench.core import VerificationResult
from puzzlebench.render import RasterImage
from puzzlebench.scene import BADGE_NO, BADGE_YES, Circle, Line, Polyline, Rect, Scene
from puzzlebench.vision import count_answer_pixels, ssim


def ssim_verify(truth: RasterImage, candidate: RasterImage,
                threshold: float) -> VerificationResult:
    if truth.pixels.shape != candidate.pixels.shape:
        return VerificationResult.fail(
            "dimension mismatch", check_name="ssim",
            expected=[truth.height, truth.width],
            got=[candidate.height, candidate.width])
    score = ssim(truth, candidate)
    if score >= threshold:
        return VerificationResult.ok(check_name="ssim", ssim=score,
                                     threshold=threshold)
    return VerificationResult.fail(
        f"ssim {score:.6f} below threshold {threshold}",
        check_name="ssim", ssim=score, threshold=threshold)


def badge_scene(answer: bool, variant: int = 0) -> Scene:
    """Full-canvas answer badge; green disc = YES, red = NO.

    The four variants differ only in frame style so that a puzzle's four
    opposite-answer distractors are visually distinct.
    """
    sc = Scene(10.0, 10.0)
    color = BADGE_YES if answer else BADGE_NO
    variant = variant % 4
    if variant == 0:
        sc.add(Circle(5, 5, 4.2, fill=color))
    elif variant == 1:
        sc.add(Rect(1.2, 1.2, 7.6, 7.6, fill=color))
    elif variant == 2:
        sc.add(Circle(5, 5, 4.2, fill=color))
        sc.add(Circle(5, 5, 3.5, stroke="white", stroke_width=0.22))
    else:
        sc.add(Circle(5, 5, 3.4, fill=color))
    glyph_w = 0.72 if variant != 3 else 0.95
    if answer:
        sc.add(Polyline(((3.1, 5.1), (4.5, 6.5), (6.9, 3.6)),
                        color="white", width=glyph_w))
    else:
        sc.add(Line(3.4, 3.4, 6.6, 6.6, color="white", width=glyph_w))
        sc.add(Line(3.4, 6.6, 6.6, 3.4, color="white", width=glyph_w))
    return sc


def verify_badge(expected: bool, candidate: RasterImage) -> VerificationResult:
    green, red = count_answer_pixels(candidate)
    if green == 0 and red == 0:
        return VerificationResult.fail("no answer detected", check_name="badge",
                                       green=0, red=0)
    answer = green >= red  # green wins exact ties
    if answer == expected:
        return VerificationResult.ok(check_name="badge", answer=answer,
                                     expected=expected, green=green, red=red)
    return VerificationResult.fail(
        f"answer {'YES' if answer else 'NO'} but expected "
        f"{'YES' if expected else 'NO'}",
        check_name="badge", answer=answer, expected=expected,
        green=green, red=red)
