import { initAll } from "./widget";

if (document.readyState === "loading") {
  document.addEventListener("DOMContentLoaded", () => {
    void initAll();
  });
} else {
  void initAll();
}
