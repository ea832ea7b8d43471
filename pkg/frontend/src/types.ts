/** Wire types mirroring the gateway's JSON documents. */

export interface SliderSpec {
  type: "slider";
  label: string;
  min: number;
  max: number;
  step: number;
  default: number;
}

export interface NumberSpec {
  type: "number";
  label: string;
  default: number;
}

export interface TextSpec {
  type: "text";
  label: string;
  default: string;
}

export interface DropdownSpec {
  type: "dropdown";
  label: string;
  options: string[];
  default: string;
}

export interface ToggleSpec {
  type: "toggle";
  label: string;
  default: boolean;
}

export type ControlSpec = SliderSpec | NumberSpec | TextSpec | DropdownSpec | ToggleSpec;

export type ControlValue = number | string | boolean;

export interface CardDoc {
  schema_version: number;
  card: { name: string; description: string; author: string; tags: string[] };
  media_in: "audio" | "midi";
  media_out: "audio" | "midi" | "labels";
  controls: ControlSpec[];
}

export interface LabelDoc {
  t: number;
  duration: number | null;
  label: string;
  description: string | null;
  amplitude: number | null;
  pitch: number | null;
  color: string | null;
  link: string | null;
}

export interface RegistryEntry {
  name: string;
  url: string;
}

export interface StateDoc {
  media_kind: "audio" | "midi" | null;
  source_name: string | null;
  duration_s: number | null;
  can_undo: boolean;
  can_redo: boolean;
  endpoint: { url: string; card: CardDoc } | null;
  registry: RegistryEntry[];
  status: string;
  info: string;
  labels: LabelDoc[];
}

export interface ProgressDoc {
  state: "idle" | "queued" | "running" | "complete" | "error" | "cancelled";
  progress: number;
  message: string;
}

export interface WaveformDoc {
  bins: [number, number][];
  sample_rate: number;
  duration_s: number;
}

export interface NoteDoc {
  start_s: number;
  duration_s: number;
  pitch: number;
  velocity: number;
  channel: number;
}
