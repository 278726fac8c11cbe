"""Standard MIDI File decoding: chunks, variable-length quantities, running
status, and note-on/note-off pairing into timed notes.

Only note events survive decoding; meta events and sysex are consumed and
skipped, except end-of-track, which closes the track.  Timing stays in ticks
relative to the header's division (ticks per quarter note); tempo meta events
are deliberately ignored because downstream duration classes are ratios of
ticks to division and therefore tempo-independent.

MissingHeader covers both an absent MThd chunk and one whose fixed fields are
malformed (bad length, unknown format, zero division).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .errors import (
    DanglingStatus,
    InvalidVlq,
    MissingHeader,
    SmpteDivision,
    TruncatedChunk,
)

NOTE_OFF = 0x80
NOTE_ON = 0x90
_META = 0xFF
_SYSEX = (0xF0, 0xF7)
_END_OF_TRACK = 0x2F

# data bytes per channel-message status nibble
_DATA_LEN = {0x80: 2, 0x90: 2, 0xA0: 2, 0xB0: 2, 0xC0: 1, 0xD0: 1, 0xE0: 2}


@dataclass(frozen=True)
class SmfHeader:
    format: int
    track_count: int
    division: int


@dataclass(frozen=True)
class NoteEvent:
    """Note on/off at an absolute tick ('on' means velocity > 0)."""

    tick: int
    kind: str
    channel: int
    pitch: int
    velocity: int


@dataclass(frozen=True)
class TrackEvents:
    events: tuple[NoteEvent, ...]
    end_tick: int


@dataclass(frozen=True)
class RawNote:
    pitch: int
    onset: int
    duration: int
    track: int
    channel: int


@dataclass
class SmfDiagnostics:
    trailing_bytes: int = 0
    missing_end_of_track: int = 0
    unmatched_note_ons: int = 0
    orphan_note_offs: int = 0
    zero_length_notes: int = 0

    def to_dict(self) -> dict:
        return {
            "trailing_bytes": self.trailing_bytes,
            "missing_end_of_track": self.missing_end_of_track,
            "unmatched_note_ons": self.unmatched_note_ons,
            "orphan_note_offs": self.orphan_note_offs,
            "zero_length_notes": self.zero_length_notes,
        }


@dataclass(frozen=True)
class ParsedSmf:
    header: SmfHeader
    tracks: tuple[TrackEvents, ...]
    trailing_bytes: int
    missing_end_of_track: int


def read_vlq(data: bytes, pos: int) -> tuple[int, int]:
    """Decode a variable-length quantity at pos; returns (value, next_pos)."""
    value = 0
    for i in range(4):
        if pos + i >= len(data):
            raise InvalidVlq(f"unterminated variable-length quantity at offset {pos}")
        byte = data[pos + i]
        value = (value << 7) | (byte & 0x7F)
        if not byte & 0x80:
            return value, pos + i + 1
    raise InvalidVlq(f"variable-length quantity longer than 4 bytes at offset {pos}")


def _read_data_byte(data: bytes, pos: int, what: str) -> int:
    if pos >= len(data):
        raise TruncatedChunk(f"track data ends inside a {what}")
    byte = data[pos]
    if byte & 0x80:
        raise DanglingStatus(f"expected {what} data byte at offset {pos}, got status 0x{byte:02X}")
    return byte


def _parse_track(data: bytes) -> tuple[TrackEvents, bool]:
    """Decode one MTrk payload; returns the track and whether EOT was seen."""
    events: list[NoteEvent] = []
    pos = 0
    tick = 0
    running_status: int | None = None
    while pos < len(data):
        delta, pos = read_vlq(data, pos)
        tick += delta
        if pos >= len(data):
            raise TruncatedChunk("track data ends after a delta time")
        byte = data[pos]
        if byte == _META:
            pos += 1
            if pos >= len(data):
                raise TruncatedChunk("track data ends inside a meta event")
            meta_type = data[pos]
            pos += 1
            length, pos = read_vlq(data, pos)
            if pos + length > len(data):
                raise TruncatedChunk(
                    f"meta event 0x{meta_type:02X} declares {length} bytes past track end"
                )
            pos += length
            if meta_type == _END_OF_TRACK:
                return TrackEvents(events=tuple(events), end_tick=tick), True
            running_status = None
            continue
        if byte in _SYSEX:
            pos += 1
            length, pos = read_vlq(data, pos)
            if pos + length > len(data):
                raise TruncatedChunk(f"sysex declares {length} bytes past track end")
            pos += length
            running_status = None
            continue
        if byte & 0x80:
            if byte >= 0xF0:
                raise DanglingStatus(f"unsupported system status 0x{byte:02X} in track data")
            running_status = byte
            pos += 1
        elif running_status is None:
            raise DanglingStatus(f"data byte 0x{byte:02X} at offset {pos} with no status in scope")
        status = running_status
        kind_nibble = status & 0xF0
        channel = status & 0x0F
        first = _read_data_byte(data, pos, "channel message")
        pos += 1
        if _DATA_LEN[kind_nibble] == 2:
            second = _read_data_byte(data, pos, "channel message")
            pos += 1
        else:
            second = 0
        if kind_nibble == NOTE_ON:
            kind = "on" if second > 0 else "off"
            events.append(
                NoteEvent(tick=tick, kind=kind, channel=channel, pitch=first, velocity=second)
            )
        elif kind_nibble == NOTE_OFF:
            events.append(
                NoteEvent(tick=tick, kind="off", channel=channel, pitch=first, velocity=second)
            )
    return TrackEvents(events=tuple(events), end_tick=tick), False


def parse_smf(data: bytes) -> ParsedSmf:
    """Decode a complete Standard MIDI File buffer.

    Unknown chunk types are skipped by their declared length.  Bytes after
    the header's declared number of tracks that do not form a complete chunk
    are counted as trailing garbage rather than failing the parse.
    """
    if len(data) < 8 or data[0:4] != b"MThd":
        raise MissingHeader("no MThd chunk at offset 0")
    header_len = int.from_bytes(data[4:8], "big")
    if header_len < 6:
        raise MissingHeader(f"MThd declares {header_len} bytes; need at least 6")
    if 8 + header_len > len(data):
        raise TruncatedChunk(f"MThd declares {header_len} bytes past end of buffer")
    fmt = int.from_bytes(data[8:10], "big")
    declared_tracks = int.from_bytes(data[10:12], "big")
    division = int.from_bytes(data[12:14], "big")
    if fmt not in (0, 1, 2):
        raise MissingHeader(f"unknown SMF format {fmt}")
    if division & 0x8000:
        raise SmpteDivision("SMPTE division is not supported; use ticks per quarter note")
    if division == 0:
        raise MissingHeader("division of 0 ticks per quarter note is invalid")

    tracks: list[TrackEvents] = []
    missing_eot = 0
    trailing = 0
    pos = 8 + header_len
    while pos < len(data):
        if pos + 8 > len(data):
            trailing = len(data) - pos
            break
        chunk_type = data[pos : pos + 4]
        chunk_len = int.from_bytes(data[pos + 4 : pos + 8], "big")
        if pos + 8 + chunk_len > len(data):
            if len(tracks) >= declared_tracks:
                trailing = len(data) - pos
                break
            raise TruncatedChunk(
                f"{chunk_type!r} chunk declares {chunk_len} bytes past end of buffer"
            )
        payload = data[pos + 8 : pos + 8 + chunk_len]
        pos += 8 + chunk_len
        if chunk_type == b"MTrk":
            track, saw_eot = _parse_track(payload)
            tracks.append(track)
            if not saw_eot:
                missing_eot += 1
    header = SmfHeader(format=fmt, track_count=len(tracks), division=division)
    return ParsedSmf(
        header=header,
        tracks=tuple(tracks),
        trailing_bytes=trailing,
        missing_end_of_track=missing_eot,
    )


def pair_notes(
    tracks: tuple[TrackEvents, ...] | list[TrackEvents],
    diagnostics: SmfDiagnostics | None = None,
) -> tuple[list[RawNote], SmfDiagnostics]:
    """Match note-ons to note-offs, FIFO per (track, channel, pitch).

    Unmatched note-ons are closed at the track's final tick and tallied;
    orphan note-offs are tallied and dropped; zero-length pairs are tallied
    and dropped (RawNote durations are always >= 1).
    """
    diag = diagnostics if diagnostics is not None else SmfDiagnostics()
    notes: list[RawNote] = []
    for track_index, track in enumerate(tracks):
        pending: dict[tuple[int, int], deque[int]] = {}
        for event in track.events:
            key = (event.channel, event.pitch)
            if event.kind == "on":
                pending.setdefault(key, deque()).append(event.tick)
            else:
                queue = pending.get(key)
                if not queue:
                    diag.orphan_note_offs += 1
                    continue
                onset = queue.popleft()
                duration = event.tick - onset
                if duration >= 1:
                    notes.append(
                        RawNote(
                            pitch=event.pitch,
                            onset=onset,
                            duration=duration,
                            track=track_index,
                            channel=event.channel,
                        )
                    )
                else:
                    diag.zero_length_notes += 1
        for (channel, pitch), queue in sorted(pending.items()):
            for onset in queue:
                diag.unmatched_note_ons += 1
                duration = track.end_tick - onset
                if duration >= 1:
                    notes.append(
                        RawNote(
                            pitch=pitch,
                            onset=onset,
                            duration=duration,
                            track=track_index,
                            channel=channel,
                        )
                    )
                else:
                    diag.zero_length_notes += 1
    return notes, diag


def extract_notes(data: bytes) -> tuple[SmfHeader, list[RawNote], SmfDiagnostics]:
    """Parse a buffer and pair its events in one step."""
    parsed = parse_smf(data)
    diag = SmfDiagnostics(
        trailing_bytes=parsed.trailing_bytes,
        missing_end_of_track=parsed.missing_end_of_track,
    )
    notes, diag = pair_notes(parsed.tracks, diag)
    return parsed.header, notes, diag
