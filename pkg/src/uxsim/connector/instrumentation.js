// Injected at document start so late-registered listeners are still seen.
// Marks nodes that register hover listeners (maybe-hoverable) and click
// listeners (data-has-click-listener) so the parser can classify them.
(function () {
  if (window.__uxsimInstrumented) return;
  window.__uxsimInstrumented = true;

  var HOVER_EVENTS = { mouseover: 1, mouseenter: 1, pointerover: 1, pointerenter: 1 };
  var original = EventTarget.prototype.addEventListener;

  EventTarget.prototype.addEventListener = function (type, listener, options) {
    try {
      if (this && this.setAttribute) {
        if (HOVER_EVENTS[type]) this.setAttribute("data-maybe-hoverable", "true");
        if (type === "click") this.setAttribute("data-has-click-listener", "true");
      }
    } catch (e) {
      /* never break the page */
    }
    return original.call(this, type, listener, options);
  };
})();
