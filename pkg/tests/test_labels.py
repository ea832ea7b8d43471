import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from harpkit import labels
from harpkit.errors import ErrorCode, HarpError


class TestParseLabels:
    def test_minimal_entry(self):
        out = labels.parse_labels([{"t": 1.25, "duration": 0.5, "label": "chorus"}])
        assert len(out) == 1
        lb = out[0]
        assert (lb.t, lb.duration, lb.text) == (1.25, 0.5, "chorus")
        assert lb.amplitude is None and lb.pitch is None and lb.color is None

    def test_negative_t_rejected(self):
        with pytest.raises(HarpError) as e:
            labels.parse_labels([{"t": -1, "label": "x"}])
        assert e.value.code is ErrorCode.E140_RemoteJobError
        assert "labels[0].t" in e.value.developer_message

    def test_empty(self):
        assert labels.parse_labels([]) == ()

    def test_out_of_range_amplitude(self):
        with pytest.raises(HarpError) as e:
            labels.parse_labels([{"t": 0, "label": "x", "amplitude": 1.5}])
        assert "amplitude" in e.value.developer_message

    def test_out_of_range_pitch(self):
        with pytest.raises(HarpError):
            labels.parse_labels([{"t": 0, "label": "x", "pitch": 200}])

    def test_full_entry(self):
        out = labels.parse_labels(
            [
                {
                    "t": 3.0,
                    "duration": 1.0,
                    "label": "verse",
                    "description": "long text",
                    "amplitude": -0.5,
                    "pitch": 64,
                    "color": "#00ff0080",
                    "link": "https://example.com",
                }
            ]
        )
        lb = out[0]
        assert lb.color == labels.RGBA(0, 255, 0, 128)
        assert lb.pitch == 64 and lb.amplitude == -0.5
        assert lb.link == "https://example.com"

    def test_error_names_index(self):
        with pytest.raises(HarpError) as e:
            labels.parse_labels([{"t": 0, "label": "ok"}, {"t": 1}])
        assert "labels[1].label" in e.value.developer_message


class TestColor:
    def test_rrggbb(self):
        assert labels.parse_color("#FF0000") == labels.RGBA(255, 0, 0, 255)

    def test_rrggbbaa(self):
        assert labels.parse_color("#00ff0080") == labels.RGBA(0, 255, 0, 128)

    def test_named_rejected(self):
        with pytest.raises(ValueError):
            labels.parse_color("red")

    def test_bad_hex(self):
        with pytest.raises(ValueError):
            labels.parse_color("#zzzzzz")

    @settings(max_examples=100, deadline=None)
    @given(
        r=st.integers(0, 255), g=st.integers(0, 255),
        b=st.integers(0, 255), a=st.integers(0, 255),
    )
    def test_round_trip(self, r, g, b, a):
        c = labels.RGBA(r, g, b, a)
        assert labels.parse_color(labels.format_color(c)) == c

    def test_alpha_exhaustive(self):
        for a in range(256):
            c = labels.RGBA(12, 200, 7, a)
            assert labels.parse_color(labels.format_color(c)) == c

    def test_palette_cycle(self):
        lb = labels.Label(t=0, text="x")
        assert labels.label_color(lb, 0) == labels.DEFAULT_PALETTE[0]
        assert labels.label_color(lb, 9) == labels.DEFAULT_PALETTE[1]
        colored = labels.Label(t=0, text="x", color=labels.RGBA(1, 2, 3))
        assert labels.label_color(colored, 5) == labels.RGBA(1, 2, 3)


WAVE_VP = labels.Viewport(start_s=0.0, duration_s=10.0, width_px=1000, height_px=400,
                          mode="waveform")
ROLL_VP = labels.Viewport(start_s=0.0, duration_s=10.0, width_px=1000, height_px=880,
                          mode="pianoroll", pitch_min=21, pitch_max=108)


class TestLayout:
    def test_linear_x(self):
        g = labels.layout_label(labels.Label(t=2.5, text="x"), WAVE_VP)
        assert g.x_px == 250.0

    def test_amplitude_midline(self):
        g = labels.layout_label(labels.Label(t=0, text="x", amplitude=0.0), WAVE_VP)
        assert g.y_px == 200.0

    def test_amplitude_default_is_midline(self):
        g = labels.layout_label(labels.Label(t=0, text="x"), WAVE_VP)
        assert g.y_px == 200.0

    def test_pianoroll_top_row(self):
        g = labels.layout_label(labels.Label(t=0, text="x", pitch=108), ROLL_VP)
        assert g.y_px == pytest.approx(0.5 / 88 * 880)

    def test_point_label_zero_width(self):
        g = labels.layout_label(labels.Label(t=1, text="x"), WAVE_VP)
        assert g.width_px == 0.0

    def test_duration_width(self):
        g = labels.layout_label(labels.Label(t=1, duration=2.0, text="x"), WAVE_VP)
        assert g.width_px == 200.0

    def test_visibility(self):
        inside = labels.layout_label(labels.Label(t=5, text="x"), WAVE_VP)
        outside = labels.layout_label(labels.Label(t=11, text="x"), WAVE_VP)
        spanning = labels.layout_label(labels.Label(t=9.5, duration=5, text="x"), WAVE_VP)
        before = labels.layout_label(labels.Label(t=0, duration=1, text="x"),
                                     labels.Viewport(5, 5, 100, 100, "waveform"))
        assert inside.visible and spanning.visible
        assert not outside.visible and not before.visible

    @settings(max_examples=100, deadline=None)
    @given(
        t=st.floats(min_value=0, max_value=100),
        delta=st.floats(min_value=0, max_value=100),
    )
    def test_affine_in_t(self, t, delta):
        a = labels.layout_label(labels.Label(t=t, text="x"), WAVE_VP)
        b = labels.layout_label(labels.Label(t=t + delta, text="x"), WAVE_VP)
        expected = delta / WAVE_VP.duration_s * WAVE_VP.width_px
        assert (b.x_px - a.x_px) / WAVE_VP.width_px == pytest.approx(
            expected / WAVE_VP.width_px, abs=1e-9
        )

    def test_equal_t_equal_x(self):
        a = labels.layout_label(labels.Label(t=3.3, text="a"), WAVE_VP)
        b = labels.layout_label(labels.Label(t=3.3, duration=1, text="b", amplitude=0.9), WAVE_VP)
        assert a.x_px == b.x_px


label_strategy = st.builds(
    labels.Label,
    t=st.floats(min_value=0, max_value=1e4, allow_nan=False),
    text=st.text(max_size=20),
    duration=st.one_of(st.none(), st.floats(min_value=0, max_value=100)),
    description=st.one_of(st.none(), st.text(max_size=50)),
    amplitude=st.one_of(st.none(), st.floats(min_value=-1, max_value=1)),
    pitch=st.one_of(st.none(), st.integers(0, 127)),
    color=st.one_of(st.none(), st.builds(labels.RGBA, st.integers(0, 255),
                                         st.integers(0, 255), st.integers(0, 255),
                                         st.integers(0, 255))),
    link=st.one_of(st.none(), st.just("https://example.com/x")),
)


@settings(max_examples=100, deadline=None)
@given(label_set=st.lists(label_strategy, max_size=10))
def test_serialize_parse_identity(label_set):
    assert labels.parse_labels(labels.serialize_labels(tuple(label_set))) == tuple(label_set)
